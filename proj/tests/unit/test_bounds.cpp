#include <cmath>
#include <numbers>

#include "doctest.h"
#include "latstab/bounds.hpp"
#include "latstab/error.hpp"
#include "latstab/haar_weyl.hpp"
#include "latstab/su2.hpp"

using namespace latstab;
constexpr double kPi = std::numbers::pi;

namespace {

double extra(const BoundReport& r, const std::string& key) {
  for (const auto& [k, v] : r.extras)
    if (k == key) return v;
  FAIL("missing extra " << key);
  return 0.0;
}

ModelParams make(int d, int L, int N, double a, GroupKind g = GroupKind::U) {
  ModelParams p;
  p.d = d;
  p.L = L;
  p.N = N;
  p.a = a;
  p.group = g;
  p.kappa_u2 = 1.0;
  p.m_u = 0.0;
  return p;
}

}  // namespace

TEST_CASE("decision rule") {
  CHECK(decide(0.5, 0.0, 0.0, 1.0, false) == Verdict::Pass);
  CHECK(decide(1.0 + 1e-10, 0.0, 0.0, 1.0, false) == Verdict::Pass);
  CHECK(decide(1.0 + 1e-6, 0.0, 0.0, 1.0, false) == Verdict::Fail);
  CHECK(decide(-1e-6, 0.0, 0.0, 1.0, false) == Verdict::Fail);
  CHECK(decide(1.2, 0.1, 0.0, 1.0, true) == Verdict::Pass);
  CHECK(decide(1.4, 0.1, 0.0, 1.0, true) == Verdict::Fail);
  CHECK(decide(0.5, 0.9, 0.0, 1.0, true) == Verdict::Inconclusive);
  CHECK(decide(std::nan(""), 0.0, 0.0, 1.0, false) == Verdict::Fail);
  CHECK(std::string(to_string(Verdict::Inconclusive)) == "inconclusive");
}

TEST_CASE("constants") {
  auto p = make(2, 4, 1, 1.0);
  const auto c = compute_constants(p);
  CHECK(c.c_b_upper == doctest::Approx(2 * 0.75 * std::log(2.0) / 2));
  CHECK(c.c_y_upper == doctest::Approx(std::log(kPi / (2 * std::sqrt(2.0))) + 0.5 * std::log(kPi)));
  // U(1), k0 = 8: -ln 2pi - ln(8)/2 + ln I(sqrt(2) pi/2)
  const double i_l = std::sqrt(kPi) * std::erf(std::sqrt(2.0) * kPi / 2);
  CHECK(c.c_y_lower == doctest::Approx(-std::log(2 * kPi) - 0.5 * std::log(8.0) + std::log(i_l)).epsilon(1e-10));
  CHECK(c.c_upper == doctest::Approx(c.c_b_upper + c.c_y_upper * 9.0 / 16.0));
  CHECK(c.c_upper <= c.c_upper_uniform);
  CHECK(c.c_lower >= c.c_lower_uniform);
  auto pr = p;
  pr.field = FieldKind::Real;
  pr.n_f = 3;
  CHECK(compute_constants(pr).c_b_upper == doctest::Approx(3 * 0.75 * std::log(2.0) / 2));
  auto su = make(3, 2, 2, 1.0, GroupKind::SU);
  const auto cs = compute_constants(su);
  CHECK(cs.c_y_upper == doctest::Approx(std::log(kPi * kPi / 4 * std::sqrt(kPi) / 4)));
  CHECK(cs.c_y_lower < cs.c_y_upper);
  CHECK_THROWS_AS(compute_constants(make(2, 2, 3, 1.0, GroupKind::SU)), InvalidArgument);
}

TEST_CASE("field bound over random configurations") {
  for (double a : {1.0, 0.01}) {
    Theorem1Options o;
    o.n_configs = 30;
    const auto r = verify_theorem1(make(3, 2, 2, a), o);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.violations == 0);
    CHECK(r.samples == 30);
    CHECK(extra(r, "max_log_det_q") <= 0.0);
    CHECK(extra(r, "min_log_z_b") >= 0.0);
    o.workers = 4;
    const auto r4 = verify_theorem1(make(3, 2, 2, a), o);
    CHECK(r4.value == r.value);
  }
}

TEST_CASE("pure gauge bound in d = 2 is a-independent and holds") {
  for (int L = 2; L <= 6; ++L)
    for (double a : {1.0, 1e-2, 1e-4}) {
      const auto r = verify_theorem2(make(2, L, 1, a));
      CHECK(r.verdict == Verdict::Pass);
      CHECK(r.lower < r.value);
      CHECK(r.value < r.upper);
      CHECK(extra(r, "direct_single_bond_bound_ok") == 1.0);
    }
  const auto su = verify_theorem2(make(2, 3, 2, 0.1, GroupKind::SU));
  CHECK(su.verdict == Verdict::Pass);
  const auto u2 = verify_theorem2(make(2, 3, 2, 0.1));
  CHECK(u2.verdict == Verdict::Pass);
}

TEST_CASE("pure gauge bound in d = 3 by Monte Carlo") {
  Theorem2Options o;
  o.n_samples = 20000;
  const auto r = verify_theorem2(make(3, 2, 2, 1.0, GroupKind::SU), o);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.std_error > 0.0);
  CHECK(r.samples == 20000);
}

TEST_CASE("full model bound with sandwich check") {
  const auto q = verify_theorem3(make(2, 2, 1, 1.0));
  CHECK(q.verdict == Verdict::Pass);
  CHECK(extra(q, "sandwich_ok") == 1.0);
  CHECK(extra(q, "uniform_ok") == 1.0);
  CHECK(q.detail == "plaquette-angle quadrature");
  Theorem3Options o;
  o.n_samples = 4000;
  const auto mc = verify_theorem3(make(3, 2, 2, 1.0, GroupKind::SU), o);
  CHECK(mc.verdict == Verdict::Pass);
  CHECK(extra(mc, "sandwich_ok") == 1.0);
}

TEST_CASE("quadratic plaquette lemma") {
  LemmaOptions o;
  o.n_samples = 20000;
  for (int k = 1; k <= 4; ++k) {
    const auto u1 = verify_quadratic_lemma(GroupKind::U, 1, k, o);
    CHECK(u1.verdict == Verdict::Pass);
    CHECK(u1.value <= 1.0);
    const auto su2 = verify_quadratic_lemma(GroupKind::SU, 2, k, o);
    CHECK(su2.verdict == Verdict::Pass);
  }
  o.n_samples = 3000;
  CHECK(verify_quadratic_lemma(GroupKind::U, 2, 2, o).verdict == Verdict::Pass);
  CHECK(verify_quadratic_lemma(GroupKind::SU, 3, 4, o).verdict == Verdict::Pass);
  CHECK_THROWS_AS(verify_quadratic_lemma(GroupKind::U, 1, 5, o), InvalidArgument);
}

TEST_CASE("SU(2) lemma ratio") {
  LemmaOptions o;
  o.n_samples = 2000;
  const auto k3 = verify_quadratic_lemma(GroupKind::SU, 2, 3, o);
  CHECK(k3.value > 0.0);
  CHECK(k3.value <= 1.0);
  // k = 1: A_p = 4(1 - cos alpha) against k N |lambda|^2 = 4 alpha^2, so the ratio tends to 1/2
  o.n_samples = 100000;
  const auto k1 = verify_quadratic_lemma(GroupKind::SU, 2, 1, o);
  CHECK(k1.value > 0.49);
  CHECK(k1.value <= 0.5);
}

TEST_CASE("norm inequalities and worker determinism") {
  LemmaOptions o;
  o.n_samples = 10000;
  const auto r = verify_norm_inequalities(3, o);
  CHECK(r.verdict == Verdict::Pass);
  o.workers = 4;
  const auto r4 = verify_norm_inequalities(3, o);
  CHECK(r4.value == r.value);
  CHECK(r4.margin == r.margin);
}
