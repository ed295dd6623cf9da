#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "latstab/error.hpp"
#include "latstab/haar_weyl.hpp"
#include "latstab/su2.hpp"

using namespace latstab;
using namespace latstab::su2;
constexpr double kPi = std::numbers::pi;

namespace {

Vec3 random_in_ball(SampleStream& rng, double radius) {
  for (;;) {
    Vec3 a{2 * rng.uniform() - 1, 2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
    if (norm(a) < 1.0) return {radius * a[0], radius * a[1], radius * a[2]};
  }
}

CMatrix a_dot_sigma(const Vec3& a) {
  return a[0] * testutil::pauli(1) + a[1] * testutil::pauli(2) + a[2] * testutil::pauli(3);
}

}  // namespace

TEST_CASE("su2_exp examples") {
  const auto id = su2_exp({0, 0, 0});
  CHECK(id.w0 == 1.0);
  CHECK(norm(id.w) == 0.0);
  const auto p = su2_exp({0, 0, kPi / 2});
  CHECK(p.w0 == doctest::Approx(0.0).scale(1.0));
  CHECK(p.w[2] == doctest::Approx(1.0));
}

TEST_CASE("su2_exp agrees with the generic exponential") {
  double worst = 0.0;
  for (int s = 0; s < 2000; ++s) {
    SampleStream rng(1, s);
    const Vec3 a = random_in_ball(rng, kPi);
    const CMatrix generic = exp_hermitian(a_dot_sigma(a)).matrix();
    worst = std::max(worst, (su2_exp(a).matrix() - generic).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("series branch is continuous near zero") {
  for (double r : {1e-9, 1e-6, 9.9e-5, 1.01e-4, 1e-3}) {
    const Vec3 a{r / std::sqrt(3.0), r / std::sqrt(3.0), r / std::sqrt(3.0)};
    const auto p = su2_exp(a);
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
    const Vec3 b = su2_log(p);
    for (int k = 0; k < 3; ++k) CHECK(b[k] == doctest::Approx(a[k]).epsilon(1e-10));
  }
}

TEST_CASE("su2_log examples and the undefined point") {
  const Vec3 z = su2_log(GroupPoint{1, {0, 0, 0}});
  CHECK(norm(z) == 0.0);
  const Vec3 b = su2_log(GroupPoint{0, {0, 0, 1}});
  CHECK(b[2] == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(su2_log(GroupPoint{-1, {0, 0, 0}}), NumericError);
}

TEST_CASE("su2_log matches the arcsin branch formulas") {
  for (int s = 0; s < 2000; ++s) {
    SampleStream rng(2, s);
    std::normal_distribution<double> nd;
    GroupPoint p{nd(rng), {nd(rng), nd(rng), nd(rng)}};
    const double r = p.norm();
    p.w0 /= r;
    for (auto& w : p.w) w /= r;
    const double wn = norm(p.w);
    const double scale = p.w0 > 0 ? std::asin(wn) / wn : (kPi - std::asin(wn)) / wn;
    const Vec3 b = su2_log(p);
    for (int k = 0; k < 3; ++k) CHECK(b[k] == doctest::Approx(scale * p.w[k]).epsilon(1e-9));
    CHECK(norm(b) < kPi);
  }
}

TEST_CASE("exp(log p) = p on random sphere points, including w0 < 0") {
  int negatives = 0;
  for (int s = 0; s < 10000; ++s) {
    SampleStream rng(3, s);
    std::normal_distribution<double> nd;
    GroupPoint p{nd(rng), {nd(rng), nd(rng), nd(rng)}};
    const double r = p.norm();
    p.w0 /= r;
    for (auto& w : p.w) w /= r;
    if (p.w0 < 0) ++negatives;
    const GroupPoint q = su2_exp(su2_log(p));
    CHECK(std::abs(q.w0 - p.w0) < 1e-10);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(q.w[k] - p.w[k]) < 1e-10);
  }
  CHECK(negatives > 4000);
}

TEST_CASE("log(exp A) = A on the injectivity domain") {
  for (int s = 0; s < 10000; ++s) {
    SampleStream rng(4, s);
    const Vec3 a = random_in_ball(rng, kPi * 0.999999);
    const Vec3 b = su2_log(su2_exp(a));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10 * std::max(1.0, std::abs(a[k]) * 1e3));
  }
}

TEST_CASE("su2_exp is injective on D and collapses the sphere |A| = pi") {
  for (int s = 0; s < 10000; ++s) {
    SampleStream rng(5, s);
    const Vec3 a = random_in_ball(rng, kPi), b = random_in_ball(rng, kPi);
    const double dist = norm({a[0] - b[0], a[1] - b[1], a[2] - b[2]});
    if (dist <= 1e-6) continue;
    const auto p = su2_exp(a), q = su2_exp(b);
    const double d = std::hypot(p.w0 - q.w0, norm({p.w[0] - q.w[0], p.w[1] - q.w[1], p.w[2] - q.w[2]}));
    CHECK(d > 0.0);
  }
  for (int s = 0; s < 100; ++s) {
    SampleStream rng(6, s);
    Vec3 a = random_in_ball(rng, 1.0);
    const double r = norm(a);
    for (auto& v : a) v *= kPi / r;
    const auto p = su2_exp(a);
    CHECK(p.w0 == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(norm(p.w) < 1e-15);
  }
}

TEST_CASE("angular eigenvalues of su2_exp(A) are +-|A|") {
  for (int s = 0; s < 500; ++s) {
    SampleStream rng(7, s);
    const Vec3 a = random_in_ball(rng, kPi);
    const auto lam = angular_eigenvalues(su2_exp(a).matrix());
    CHECK(lam[0] == doctest::Approx(norm(a)).epsilon(1e-10));
    CHECK(lam[1] == doctest::Approx(-norm(a)).epsilon(1e-10));
  }
}

TEST_CASE("Haar density values and normalization") {
  CHECK(su2_haar_density({0, 0, kPi / 2}) == doctest::Approx(2.0 / std::pow(kPi, 4)).epsilon(1e-14));
  CHECK(su2_haar_density({0, 0, kPi}) == doctest::Approx(0.0).scale(1.0));
  CHECK(su2_haar_density({0, 0, 0}) == doctest::Approx(1.0 / (2 * kPi * kPi)).epsilon(1e-15));
  auto radial = [](double r) { return 4 * kPi * r * r * su2_haar_density_radial(r); };
  const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(radial, 0.0, kPi);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gluon and Weyl single-bond integrals coincide") {
  for (double a : {1.0, 0.3, 0.05})
    for (double g2 : {0.5, 1.0, 4.0})
      for (int d : {2, 3, 4}) {
        const double zg = su2_z_gluon(a, g2, d), zw = su2_z_weyl(a, g2, d);
        CHECK(std::abs(zg - zw) <= 1e-9 * zw);
      }
}

TEST_CASE("single-bond integral: weak coupling limit and generic Weyl cross-check") {
  // a^{d-4}/g^2 -> 0 at d = 4 with large g^2
  CHECK(su2_z_weyl(1.0, 1e8, 4) == doctest::Approx(1.0).epsilon(1e-7));
  const double zw = su2_z_weyl(1.0, 1.0, 4);
  const double generic = weyl_integrate(
      [](std::span<const double> l) {
        double s = 0;
        for (double v : l) s += 2 * (1 - std::cos(v));
        return std::exp(-s);
      },
      2, GroupKind::SU);
  CHECK(zw == doctest::Approx(generic).epsilon(1e-10));
  // independent check: doubled Gauss-Kronrod order
  auto f = [](double r) { return std::exp(-4.0 * (1 - std::cos(r))) * std::sin(r) * std::sin(r); };
  const double ref = (2.0 / kPi) * boost::math::quadrature::gauss_kronrod<double, 121>::integrate(f, 0.0, kPi, 25, 1e-14);
  CHECK(su2_z_gluon(1.0, 1.0, 4) == doctest::Approx(ref).epsilon(1e-11));
}

TEST_CASE("capital E: values, limit and monotonicity") {
  CHECK(capital_e(0.0) == 0.0);
  CHECK(capital_e(50.0) == doctest::Approx(std::sqrt(kPi) / 4).epsilon(1e-15));
  CHECK(capital_e(std::numeric_limits<double>::infinity()) == doctest::Approx(0.443113462726379).epsilon(1e-14));
  auto f = [](double r) { return std::exp(-r * r) * r * r; };
  CHECK(capital_e(1.3) ==
        doctest::Approx(boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.3)).epsilon(1e-13));
  double prev = -1.0;
  for (int i = 0; i < 100; ++i) {
    const double e = capital_e(0.05 * i);
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("SU(2) bound checks pass across the parameter grid") {
  CHECK(su2_bounds_check(1.0, 1.0, 3, 4).pass());
  CHECK(su2_bounds_check(0.01, 1.0, 4, 4).pass());
  CHECK(su2_bounds_check(1.0, 4.0, 4, 4).pass());
  const auto r1 = su2_bounds_check(1.0, 1.0, 2, 4), r2 = su2_bounds_check(1e-3, 2.0, 2, 4);
  CHECK(r1.upper_constant == r2.upper_constant);
  CHECK(r1.lower_constant == r2.lower_constant);
  // the scaled small-field integral approaches its bound at a = 1, g^2 = g0^2
  const auto edge = su2_bounds_check(1.0, 4.0, 3, 4);
  CHECK(edge.scaled_z_tilde == doctest::Approx(edge.lower_constant).epsilon(1e-12));
  CHECK_THROWS_AS(su2_bounds_check(1.0, 5.0, 3, 4), InvalidArgument);
}
