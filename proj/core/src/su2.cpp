#include "latstab/su2.hpp"

#include <cmath>
#include <numbers>

#include "latstab/error.hpp"
#include "latstab/quadrature.hpp"

namespace latstab::su2 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCut = 1e-4;

// sin(r)/r
double sinc(double r) {
  if (std::abs(r) < kSeriesCut) {
    const double r2 = r * r;
    return 1.0 - r2 / 6.0 + r2 * r2 / 120.0;
  }
  return std::sin(r) / r;
}

// arcsin(s)/s
double asinc(double s) {
  if (s < kSeriesCut) {
    const double s2 = s * s;
    return 1.0 + s2 / 6.0 + 3.0 * s2 * s2 / 40.0;
  }
  return std::asin(s) / s;
}

void check_params(double a, double g2, int d) {
  if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("a must lie in (0, 1]");
  if (!(g2 > 0.0)) throw InvalidArgument("g^2 must be positive");
  if (d < 2 || d > 4) throw InvalidArgument("d must be 2, 3 or 4");
}

// Radius beyond which e^{-4c(1-cos r)} < e^{-60}, using 1 - cos r >= 2r^2/pi^2.
double support_radius(double c) { return std::min(kPi, kPi * std::sqrt(60.0 / (8.0 * c))); }

}  // namespace

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double GroupPoint::norm() const { return std::sqrt(w0 * w0 + w[0] * w[0] + w[1] * w[1] + w[2] * w[2]); }

CMatrix GroupPoint::matrix() const {
  CMatrix m(2, 2);
  m(0, 0) = Complex(w0, w[2]);
  m(0, 1) = Complex(w[1], w[0]);
  m(1, 0) = Complex(-w[1], w[0]);
  m(1, 1) = Complex(w0, -w[2]);
  return m;
}

GroupPoint GroupPoint::from_matrix(const CMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw InvalidArgument("SU(2) point needs a 2x2 matrix");
  GroupPoint p;
  p.w0 = 0.5 * (m(0, 0) + m(1, 1)).real();
  p.w[2] = 0.5 * (m(0, 0) - m(1, 1)).imag();
  p.w[0] = 0.5 * (m(0, 1) + m(1, 0)).imag();
  p.w[1] = 0.5 * (m(0, 1) - m(1, 0)).real();
  return p;
}

GroupPoint su2_exp(const Vec3& a) {
  const double r = norm(a);
  const double s = sinc(r);
  return GroupPoint{std::cos(r), {s * a[0], s * a[1], s * a[2]}};
}

Vec3 su2_log(const GroupPoint& p) {
  const double wn = norm(p.w);
  if (wn == 0.0) {
    if (p.w0 < 0.0) throw NumericError("logarithm undefined at -1");
    return {0.0, 0.0, 0.0};
  }
  double scale;
  if (p.w0 > 0.0) {
    scale = asinc(std::min(wn, 1.0));
  } else if (p.w0 < 0.0) {
    scale = (kPi - std::asin(std::min(wn, 1.0))) / wn;
  } else {
    scale = (kPi / 2.0) / wn;
  }
  return {scale * p.w[0], scale * p.w[1], scale * p.w[2]};
}

double su2_haar_density_radial(double r) {
  const double s = sinc(r);
  return s * s / (2.0 * kPi * kPi);
}

double su2_haar_density(const Vec3& a) { return su2_haar_density_radial(norm(a)); }

double su2_z_gluon(double a, double g2, int d) {
  check_params(a, g2, d);
  const double c = std::pow(a, d - 4) / g2;
  // (|Omega| / 2 pi^2) int_0^pi e^{-4c(1-cos r)} sin^2 r dr, |Omega| = 4 pi
  auto f = [c](double r) {
    const double s = std::sin(r);
    const double h = std::sin(0.5 * r);
    return std::exp(-8.0 * c * h * h) * s * s;  // 1 - cos r = 2 sin^2(r/2), no cancellation
  };
  return (4.0 * kPi / (2.0 * kPi * kPi)) * integrate_adaptive(f, 0.0, support_radius(c), 1e-10);
}

double su2_z_weyl(double a, double g2, int d) {
  check_params(a, g2, d);
  const double c = std::pow(a, d - 4) / g2;
  // (1/4pi) int_{-pi}^{pi} 4 sin^2(l) e^{-4c(1 - cos l)} dl
  auto f = [c](double l) {
    const double s = std::sin(l);
    const double h = std::sin(0.5 * l);
    return 4.0 * s * s * std::exp(-8.0 * c * h * h);
  };
  const double r = support_radius(c);
  return integrate_adaptive(f, -r, r, 1e-10) / (4.0 * kPi);
}

double capital_e(double gamma) {
  if (gamma < 0.0) throw InvalidArgument("capital_e: gamma must be >= 0");
  if (std::isinf(gamma)) return kCapitalEInf;
  return 0.25 * std::sqrt(kPi) * std::erf(gamma) - 0.5 * gamma * std::exp(-gamma * gamma);
}

double su2_z_tilde(double a, double g2, int d) {
  check_params(a, g2, d);
  const double c = std::pow(a, d - 4) / g2;
  const double c2 = 8.0;  // C^2 = 4N
  const double k = 2.0 * c * (d - 1) * c2;
  return (8.0 / (kPi * kPi * kPi)) * std::pow(k, -1.5) * capital_e(std::sqrt(k) * kPi / 2.0);
}

BoundsCheck su2_bounds_check(double a, double g2, int d, int L, double g0_sq) {
  check_params(a, g2, d);
  if (L < 2) throw InvalidArgument("L must be >= 2");
  if (g2 > g0_sq) throw InvalidArgument("g^2 must not exceed g0^2");
  BoundsCheck r;
  r.a = a;
  r.g2 = g2;
  r.d = d;
  r.L = L;
  const double s_y3 = std::pow(std::pow(a, d - 4) / g2, 1.5);
  r.z = su2_z_weyl(a, g2, d);
  r.scaled_z = s_y3 * r.z;
  r.z_tilde = su2_z_tilde(a, g2, d);
  r.scaled_z_tilde = s_y3 * r.z_tilde;
  r.upper_constant = (kPi * kPi / 4.0) * kCapitalEInf;
  const double k0 = 2.0 * (d - 1) * 8.0;
  r.lower_constant = (8.0 / (kPi * kPi * kPi)) * std::pow(k0, -1.5) * capital_e(std::sqrt(k0 / g0_sq) * kPi / 2.0);
  const double tol = 1e-10;
  r.upper_ok = r.scaled_z <= r.upper_constant * (1.0 + tol);
  // z >= z_tilde is the content of the lower bound; the scaled z_tilde must
  // also dominate the a-, g-independent constant.
  r.lower_ok = r.scaled_z_tilde >= r.lower_constant * (1.0 - tol) && r.z >= r.z_tilde * (1.0 - tol);
  return r;
}

}  // namespace latstab::su2
