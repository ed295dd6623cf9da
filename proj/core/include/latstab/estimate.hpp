#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace latstab {

enum class Method { ExactDeterminant, Quadrature, MonteCarlo };
const char* to_string(Method m);

// A partition value carried in the log domain. std_error refers to the value
// itself; log_std_error is its relative counterpart.
struct Estimate {
  double log_value = 0.0;
  double log_std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  Method method = Method::ExactDeterminant;

  static constexpr double kMaxLog = 700.0;

  bool representable() const { return std::abs(log_value) < kMaxLog; }
  double value() const { return std::exp(log_value); }
  double std_error() const { return representable() ? value() * log_std_error : std::numeric_limits<double>::quiet_NaN(); }

  static Estimate exact(double log_value, Method m) {
    Estimate e;
    e.log_value = log_value;
    e.method = m;
    return e;
  }
};

// Mean/variance of plain real samples, mergeable in a fixed order (Chan et al.).
struct MeanAccumulator {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  void merge(const MeanAccumulator& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double nt = na + nb;
    mean += delta * nb / nt;
    m2 += o.m2 + delta * delta * na * nb / nt;
    n += o.n;
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

// Mean of positive weights supplied as logs: keeps sum e^{l - shift} and
// sum e^{2(l - shift)} so that e^{-S} never underflows.
struct LogMeanAccumulator {
  std::uint64_t n = 0;
  double shift = -std::numeric_limits<double>::infinity();
  double s1 = 0.0;
  double s2 = 0.0;

  void add(double log_w) {
    if (log_w > shift) {
      const double r = std::exp(shift - log_w);
      s1 *= r;
      s2 *= r * r;
      shift = log_w;
    }
    const double e = std::exp(log_w - shift);
    s1 += e;
    s2 += e * e;
    ++n;
  }
  void merge(const LogMeanAccumulator& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double m = std::max(shift, o.shift);
    const double ra = std::exp(shift - m), rb = std::exp(o.shift - m);
    s1 = s1 * ra + o.s1 * rb;
    s2 = s2 * ra * ra + o.s2 * rb * rb;
    shift = m;
    n += o.n;
  }
  double log_mean() const { return shift + std::log(s1 / static_cast<double>(n)); }
  // Standard error of the mean relative to the mean.
  double relative_std_error() const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double mean = s1 / nn;
    const double var = std::max(0.0, (s2 / nn - mean * mean) * nn / (nn - 1.0));
    return std::sqrt(var / nn) / mean;
  }
  Estimate to_estimate(std::uint64_t seed) const {
    Estimate e;
    e.log_value = log_mean();
    e.log_std_error = relative_std_error();
    e.n_samples = n;
    e.seed = seed;
    e.method = Method::MonteCarlo;
    return e;
  }
};

}  // namespace latstab
