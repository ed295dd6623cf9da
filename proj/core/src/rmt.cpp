#include "latstab/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latstab/actions.hpp"
#include "latstab/error.hpp"
#include "latstab/partition.hpp"

namespace latstab {

namespace {

constexpr double kPi = std::numbers::pi;

void fill_rate(LimitSweep& s) {
  const auto& p = s.points;
  if (p.size() < 2) return;
  const auto& a = p[p.size() - 2];
  const auto& b = p.back();
  if (a.abs_err > 0.0 && b.abs_err > 0.0 && a.x != b.x)
    s.rate = std::log(a.abs_err / b.abs_err) / std::log(a.x / b.x);
}

}  // namespace

const char* to_string(ActionChoice c) { return c == ActionChoice::Wilson ? "wilson" : "exact-quadratic"; }

double w_of_beta(double beta, int N, ActionChoice choice) {
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  if (N < 1 || N > 3) throw InvalidArgument("w_of_beta: N must be 1, 2 or 3");
  WeylQuadrature q;
  // Window around the peak; the substitution lambda = sqrt(beta) y in disguise.
  q.half_width = choice == ActionChoice::Wilson ? kPi * std::sqrt(12.5 * beta) : std::sqrt(50.0 * beta);
  const double inv = 1.0 / beta;
  if (choice == ActionChoice::Wilson)
    return weyl_integrate([inv](std::span<const double> l) { return std::exp(-inv * single_bond_action_eigen(l)); }, N,
                          GroupKind::U, q);
  return weyl_integrate(
      [inv](std::span<const double> l) {
        double s = 0.0;
        for (double v : l) s += v * v;
        return std::exp(-inv * s);
      },
      N, GroupKind::U, q);
}

double log_w_of_beta(double beta, int N, ActionChoice choice) { return std::log(w_of_beta(beta, N, choice)); }

LimitSweep cue_gue_limit(int N, std::vector<double> betas, ActionChoice choice) {
  std::sort(betas.begin(), betas.end(), std::greater<>());
  LimitSweep s;
  s.N = N;
  s.variable = "beta";
  s.target = ensemble_constants(N).ratio;
  const double expo = 0.5 * N * N;
  for (double beta : betas) {
    LimitPoint p;
    p.x = beta;
    p.value = std::exp(log_w_of_beta(beta, N, choice) - expo * std::log(beta));
    p.target = s.target;
    p.abs_err = std::abs(p.value - p.target);
    s.points.push_back(p);
  }
  fill_rate(s);
  return s;
}

LimitSweep d2_free_energy(int N, std::vector<double> as, double g2) {
  std::sort(as.begin(), as.end(), std::greater<>());
  LimitSweep s;
  s.N = N;
  s.variable = "a";
  s.target = ensemble_constants(N).log_ratio;
  for (double a : as) {
    ModelParams p;
    p.d = 2;
    p.a = a;
    p.g2 = g2;
    p.g0_sq = std::max(4.0, g2);
    p.N = N;
    p.group = GroupKind::U;
    p.validate();
    LimitPoint pt;
    pt.x = a;
    pt.value = std::log(z_single_bond(p, BondVariant::Z)) - N * N * std::log(std::sqrt(g2) * a);
    pt.target = s.target;
    pt.abs_err = std::abs(pt.value - pt.target);
    s.points.push_back(pt);
  }
  fill_rate(s);
  return s;
}

double wilson_quadratic_hypothesis_margin(int N, int points_per_axis) {
  if (N < 1) throw InvalidArgument("N must be >= 1");
  std::vector<int> idx(N, 0);
  std::vector<double> l(N);
  double worst = std::numeric_limits<double>::infinity();
  for (;;) {
    double sq = 0.0;
    for (int k = 0; k < N; ++k) {
      l[k] = -kPi + 2.0 * kPi * (idx[k] + 1) / points_per_axis;  // (-pi, pi]
      sq += l[k] * l[k];
    }
    worst = std::min(worst, single_bond_action_eigen(l) - (4.0 / (kPi * kPi)) * sq);
    int k = N - 1;
    while (k >= 0 && ++idx[k] == points_per_axis) idx[k--] = 0;
    if (k < 0) break;
  }
  return worst;
}

double displayed_limit_closed_form(int N) {
  double log_v = -0.5 * (N * N - N) * std::log(2.0) - 0.5 * N * std::log(kPi);
  for (int j = 1; j <= N - 1; ++j) log_v += std::lgamma(j + 1.0);
  return std::exp(log_v);
}

double per_n2_limit_expression(int N) {
  const double n = N;
  double s = 0.0;
  for (int j = 1; j <= N - 1; ++j) s += std::lgamma(j + 1.0);
  return n * n * (-0.5 * std::log(2.0) - std::log(2.0 * kPi) / (2.0 * n) + s / (n * n));
}

}  // namespace latstab
