#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "latstab/error.hpp"
#include "latstab/group.hpp"
#include "latstab/haar_weyl.hpp"

using namespace latstab;
constexpr double kPi = std::numbers::pi;

TEST_CASE("hs_norm of identity, zero and unitaries") {
  CHECK(hs_norm(CMatrix::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(hs_norm(CMatrix::Zero(3, 3)) == 0.0);
  for (int i = 0; i < 20; ++i) {
    SampleStream rng(11, i);
    const auto u = haar_sample(GroupKind::U, 3, rng);
    CHECK(hs_norm(u.matrix()) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(op_norm(u.matrix()) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("op_norm examples") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  CHECK(op_norm(d) == doctest::Approx(3.0).epsilon(1e-14));
  CMatrix n = CMatrix::Zero(2, 2);
  n(0, 1) = 2.0;
  CHECK(op_norm(n) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("basis is orthonormal and has the right dimension") {
  for (auto kind : {GroupKind::U, GroupKind::SU})
    for (int n = 1; n <= 4; ++n) {
      if (kind == GroupKind::SU && n == 1) continue;
      const LieBasis b = make_basis(kind, n);
      REQUIRE(b.dimension() == lie_dimension(kind, n));
      for (int i = 0; i < b.dimension(); ++i) {
        CHECK((b.generators[i] - b.generators[i].adjoint()).norm() < 1e-15);
        if (kind == GroupKind::SU) CHECK(std::abs(b.generators[i].trace()) < 1e-14);
        for (int j = 0; j < b.dimension(); ++j) {
          const double gram = (b.generators[i] * b.generators[j]).trace().real();
          CHECK(gram == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
        }
      }
    }
}

TEST_CASE("SU(2) basis is the rescaled Pauli matrices") {
  const LieBasis b = make_basis(GroupKind::SU, 2);
  CHECK((b.generators[0] - testutil::pauli(1) / std::sqrt(2.0)).norm() < 1e-15);
  CHECK((b.generators[1] - testutil::pauli(2) / std::sqrt(2.0)).norm() < 1e-15);
  CHECK((b.generators[2] - testutil::pauli(3) / std::sqrt(2.0)).norm() < 1e-15);
  const LieBasis u1 = make_basis(GroupKind::U, 1);
  REQUIRE(u1.dimension() == 1);
  CHECK(std::abs(u1.generators[0](0, 0) - 1.0) < 1e-15);
}

TEST_CASE("exp_map examples") {
  LieAlgebraElement zero{GroupKind::SU, 2, RVector::Zero(3)};
  CHECK((exp_map(zero).matrix() - CMatrix::Identity(2, 2)).norm() < 1e-15);

  LieAlgebraElement pi1{GroupKind::U, 1, RVector::Constant(1, kPi)};
  CHECK(std::abs(exp_map(pi1).matrix()(0, 0) - Complex(-1.0, 0.0)) < 1e-15);

  // X = (pi/2) sigma_3 has coefficient (pi/2) sqrt 2 on sigma_3/sqrt 2
  LieAlgebraElement x{GroupKind::SU, 2, RVector::Zero(3)};
  x.coeffs(2) = kPi / 2.0 * std::sqrt(2.0);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = Complex(0, 1);
  expected(1, 1) = Complex(0, -1);
  CHECK((exp_map(x).matrix() - expected).norm() < 1e-14);
}

TEST_CASE("log_map_spectral examples") {
  const auto id = UnitaryMatrix::identity(3);
  CHECK(log_map_spectral(id).coeffs.norm() < 1e-14);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = Complex(0, 1);
  d(1, 1) = Complex(0, -1);
  const UnitaryMatrix u(d);
  const auto lam = angular_eigenvalues(u);
  CHECK(lam[0] == doctest::Approx(kPi / 2));
  CHECK(lam[1] == doctest::Approx(-kPi / 2));
  CHECK(log_map_spectral(u).norm_squared() == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-13));
}

TEST_CASE("angular eigenvalue cut convention picks +pi") {
  const UnitaryMatrix minus_one(CMatrix::Constant(1, 1, Complex(-1.0, 0.0)));
  CHECK(angular_eigenvalues(minus_one)[0] == kPi);
  const UnitaryMatrix m2(-CMatrix::Identity(2, 2));
  for (double l : angular_eigenvalues(m2)) CHECK(l == doctest::Approx(kPi).epsilon(1e-14));
  const UnitaryMatrix m3(-CMatrix::Identity(3, 3));
  for (double l : angular_eigenvalues(m3)) CHECK(l == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(wrap_angle(-kPi) == kPi);
  CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
}

TEST_CASE("angular eigenvalues of e^{iX} are the eigenvalues of small X") {
  for (int n : {2, 3, 4}) {
    for (int s = 0; s < 50; ++s) {
      SampleStream rng(5, s);
      RVector c(n * n);
      for (int i = 0; i < n * n; ++i) c(i) = 0.3 * (2 * rng.uniform() - 1);
      LieAlgebraElement x{GroupKind::U, n, c};
      Eigen::SelfAdjointEigenSolver<CMatrix> es(x.matrix());
      std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
      std::sort(ev.begin(), ev.end(), std::greater<>());
      const auto lam = angular_eigenvalues(exp_map(x));
      for (int i = 0; i < n; ++i) CHECK(lam[i] == doctest::Approx(ev[i]).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("round trip exp(log U) = U on Haar samples") {
  double worst = 0.0;
  for (auto [kind, n] : {std::pair{GroupKind::U, 2}, {GroupKind::U, 3}, {GroupKind::SU, 2}, {GroupKind::SU, 3}}) {
    for (int s = 0; s < 2500; ++s) {
      SampleStream rng(42, s);
      const auto u = haar_sample(kind, n, rng);
      const auto x = log_map_spectral(u);
      worst = std::max(worst, hs_norm(exp_map(x).matrix() - u.matrix()));
      double lam2 = 0.0;
      for (double l : angular_eigenvalues(u)) lam2 += l * l;
      CHECK(x.norm_squared() == doctest::Approx(lam2).epsilon(1e-9));
      CHECK(x.norm_squared() <= n * kPi * kPi + 1e-9);
    }
  }
  CHECK(worst <= 1e-8);
  MESSAGE("worst round-trip error " << worst);
}

TEST_CASE("norm equivalence on random matrices") {
  for (int s = 0; s < 2000; ++s) {
    SampleStream rng(9, s);
    const int n = 1 + s % 4;
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = Complex(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
    const double hs = hs_norm(m), op = op_norm(m);
    CHECK(hs / std::sqrt(n) <= op * (1 + 1e-12));
    CHECK(op <= hs * (1 + 1e-12));
  }
}

TEST_CASE("unitarity checks and explicit repair") {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = 1e-3;
  CHECK_THROWS_AS(UnitaryMatrix{m}, NumericError);
  const auto repaired = repair_unitarity(m);
  CHECK(is_unitary(repaired.matrix()));
  CMatrix phase = CMatrix::Identity(2, 2) * Complex(0, 1);
  CHECK_NOTHROW(UnitaryMatrix{phase, GroupKind::U});
  CHECK_THROWS_AS(UnitaryMatrix(phase, GroupKind::SU), NumericError);
  CHECK_THROWS_AS(log_map_spectral(UnitaryMatrix::unchecked(2.0 * CMatrix::Identity(2, 2))), NumericError);
}
