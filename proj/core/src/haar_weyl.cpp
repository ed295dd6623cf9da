#include "latstab/haar_weyl.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include "latstab/error.hpp"
#include "latstab/quadrature.hpp"
#include "latstab/su2.hpp"

namespace latstab {

namespace {

constexpr double kPi = std::numbers::pi;

double log_factorial(int n) { return std::lgamma(n + 1.0); }

int default_nodes(int n) { return n <= 2 ? 256 : 128; }

}  // namespace

UnitaryMatrix haar_sample(GroupKind kind, int n, SampleStream& rng) {
  if (n < 1) throw InvalidArgument("haar_sample: N must be >= 1");
  if (n == 1) {
    if (kind == GroupKind::SU) return UnitaryMatrix::identity(1);
    const double theta = kPi * (2.0 * rng.uniform() - 1.0);
    return UnitaryMatrix::unchecked(CMatrix::Constant(1, 1, std::polar(1.0, theta)));
  }
  std::normal_distribution<double> normal;
  if (kind == GroupKind::SU && n == 2) {
    // uniform point on S^3
    su2::GroupPoint p;
    double r2 = 0.0;
    do {
      p.w0 = normal(rng);
      for (auto& w : p.w) w = normal(rng);
      r2 = p.w0 * p.w0 + p.w[0] * p.w[0] + p.w[1] * p.w[1] + p.w[2] * p.w[2];
    } while (r2 < 1e-300);
    const double inv = 1.0 / std::sqrt(r2);
    p.w0 *= inv;
    for (auto& w : p.w) w *= inv;
    return UnitaryMatrix::unchecked(p.matrix());
  }
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  if (kind == GroupKind::SU) {
    const Complex det = q.determinant();
    q.row(0) *= std::conj(det) / std::abs(det);
  }
  return UnitaryMatrix::unchecked(std::move(q));
}

double cue_density(std::span<const double> lambda) {
  double rho = 1.0;
  for (std::size_t j = 0; j < lambda.size(); ++j)
    for (std::size_t k = j + 1; k < lambda.size(); ++k) {
      const double s = std::sin(0.5 * (lambda[j] - lambda[k]));
      rho *= 4.0 * s * s;  // 2(1 - cos)
    }
  return rho;
}

double cue_density_vandermonde(std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  if (n == 0) return 1.0;
  CMatrix v(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) v(j, k) = std::polar(1.0, k * lambda[j]);
  return std::norm(v.determinant());
}

double gue_density(std::span<const double> y) {
  double rho = 1.0;
  for (std::size_t j = 0; j < y.size(); ++j)
    for (std::size_t k = j + 1; k < y.size(); ++k) {
      const double diff = y[j] - y[k];
      rho *= diff * diff;
    }
  return rho;
}

double log_cue_normalization(int n) { return n * std::log(2.0 * kPi) + log_factorial(n); }
double cue_normalization(int n) { return std::exp(log_cue_normalization(n)); }

double weyl_integrate(const ClassFunction& f, int n, GroupKind kind, const WeylQuadrature& quad) {
  if (n < 1) throw InvalidArgument("weyl_integrate: N must be >= 1");
  if (n >= 4) throw InvalidArgument("weyl_integrate: tensor quadrature refused for N >= 4; use Monte Carlo");
  const int dim = kind == GroupKind::U ? n : n - 1;
  if (dim == 0) {
    const double zero = 0.0;
    return f(std::span<const double>(&zero, 1));
  }
  const int nodes = quad.nodes_per_axis > 0 ? quad.nodes_per_axis : default_nodes(n);
  const double w = (quad.half_width > 0.0 && quad.half_width < kPi) ? quad.half_width : kPi;
  const double log_pref = -(log_factorial(n) + dim * std::log(2.0 * kPi));

  std::vector<double> lambda(n);
  auto integrand = [&](std::span<const double> x) {
    double sum = 0.0;
    for (int j = 0; j < dim; ++j) {
      lambda[j] = x[j];
      sum += x[j];
    }
    if (kind == GroupKind::SU) lambda[n - 1] = wrap_angle(-sum);
    return f(lambda) * cue_density(lambda);
  };

  const Rule1D fine = composite_gauss_legendre(-w, w, nodes);
  double l1 = 0.0;
  const double value = tensor_sum(fine, dim, integrand, &l1);
  const Rule1D coarse = composite_gauss_legendre(-w, w, std::max(16, nodes / 2));
  if (coarse.size() < fine.size()) {
    const double check = tensor_sum(coarse, dim, integrand);
    const double achieved = l1 > 0.0 ? std::abs(value - check) / l1 : std::abs(value - check);
    if (!std::isfinite(value) || achieved > quad.rel_tol)
      throw QuadratureError("weyl_integrate: tensor rule not converged", achieved);
  }
  return std::exp(log_pref) * value;
}

double gue_normalization_closed_form(int n) {
  double log_v = 0.5 * n * std::log(2.0 * kPi) - 0.5 * n * n * std::log(2.0);
  for (int j = 1; j <= n; ++j) log_v += log_factorial(j);
  return std::exp(log_v);
}

double gue_integral(double u, int n) {
  if (n < 1) throw InvalidArgument("gue_integral: N must be >= 1");
  if (!(u > 0.0)) throw InvalidArgument("gue_integral: u must be positive");
  auto integrand = [](std::span<const double> y) {
    double r2 = 0.0;
    for (double v : y) r2 += v * v;
    return std::exp(-r2) * gue_density(y);
  };
  if (std::isinf(u)) {
    // The polynomial part has degree 2(N-1) per axis: N+1 Hermite nodes are exact.
    const Rule1D gh = gauss_hermite(n + 1);
    return tensor_sum(gh, n, [](std::span<const double> y) { return gue_density(y); });
  }
  if (n >= 4) throw InvalidArgument("gue_integral: finite u quadrature refused for N >= 4");
  const double ueff = std::min(u, 12.0);
  const Rule1D rule = composite_gauss_legendre(-ueff, ueff, n <= 2 ? 256 : 96);
  return tensor_sum(rule, n, integrand);
}

EnsembleConstants ensemble_constants(int n) {
  EnsembleConstants c;
  c.n = n;
  c.n_c = cue_normalization(n);
  c.n_g = gue_integral(std::numeric_limits<double>::infinity(), n);
  c.ratio = c.n_g / c.n_c;
  c.log_ratio = std::log(c.n_g) - log_cue_normalization(n);
  return c;
}

}  // namespace latstab
