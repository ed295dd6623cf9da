#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latstab/actions.hpp"
#include "latstab/partition.hpp"

namespace latstab {

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

// Logarithms of the per-site / per-retained-bond constants.
struct BoundConstants {
  int d = 2, L = 2, N = 1;
  GroupKind group = GroupKind::U;
  FieldKind field = FieldKind::Complex;
  double g0_sq = 4.0;

  double c_b_upper = 0.0;
  double c_b_lower = 0.0;
  double c_y_upper = 0.0;
  double c_y_lower = 0.0;
  double i_lower = 0.0;       // I_l (U(N)) or E_0 (SU(2))
  // Lattice-dependent combination c_B + c_Y Lambda_r / Lambda_s.
  double c_upper = 0.0;
  double c_lower = 0.0;
  // L-uniform majorant/minorant using 0 <= Lambda_r/Lambda_s <= d.
  double c_upper_uniform = 0.0;
  double c_lower_uniform = 0.0;
};

// Throws InvalidArgument for groups without constants (SU(N), N != 2).
BoundConstants compute_constants(const ModelParams& params);

struct BoundReport {
  std::string theorem;
  double value = 0.0;        // log of the checked quantity
  double std_error = 0.0;    // on the log scale
  double lower = 0.0;
  double upper = 0.0;
  double margin = 0.0;       // min(value - lower, upper - value)
  Verdict verdict = Verdict::Pass;
  ModelParams params;
  std::string detail;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  // extra diagnostics (spread, min/max)
  std::vector<std::pair<std::string, double>> extras;
};

// Decision rule: deterministic values must lie inside [lower, upper] up to a
// relative 1e-8; stochastic values fail only beyond 3 standard errors and are
// inconclusive when the standard error exceeds `max_log_error`.
Verdict decide(double value, double std_error, double lower, double upper, bool stochastic,
               double max_log_error = 0.5);

struct Theorem1Options {
  int n_configs = 100;
  std::uint64_t seed = 1;
  int workers = 1;
};
// 1 <= Z_B(g) <= e^{c_{B,u} Lambda_s} and det Q <= 1 over random gauge configs.
BoundReport verify_theorem1(const ModelParams& params, const Theorem1Options& opts = {});

struct Theorem2Options {
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
};
// e^{c_{Y,l} Lambda_r} <= Z_Y <= e^{c_{Y,u} Lambda_r}; exact for d = 2, MC otherwise.
BoundReport verify_theorem2(const ModelParams& params, const Theorem2Options& opts = {});

struct Theorem3Options {
  int nodes_per_axis = 16;
  std::uint64_t n_samples = 20000;
  std::uint64_t seed = 1;
  int workers = 1;
};
// e^{c_l Lambda_s} <= Z <= e^{c_u Lambda_s} plus the generic sandwich.
BoundReport verify_theorem3(const ModelParams& params, const Theorem3Options& opts = {});

struct LemmaOptions {
  std::uint64_t n_samples = 1000000;
  std::uint64_t seed = 1;
  int workers = 1;
};
// A_p <= k N sum |lambda|^2 and A_p <= 4N with k retained Haar bonds.
BoundReport verify_quadratic_lemma(GroupKind kind, int N, int k, const LemmaOptions& opts = {});
// N^{-1/2} ||A||_HS <= ||A|| <= ||A||_HS on complex Gaussian matrices.
BoundReport verify_norm_inequalities(int N, const LemmaOptions& opts = {});

}  // namespace latstab
