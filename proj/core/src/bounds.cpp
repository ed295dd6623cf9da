#include "latstab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "latstab/error.hpp"
#include "latstab/haar_weyl.hpp"
#include "latstab/parallel.hpp"
#include "latstab/su2.hpp"

namespace latstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double log_retained_ratio(const Lattice& lat) {
  return static_cast<double>(lat.num_retained()) / lat.num_sites();
}

BoundReport make_report(const std::string& theorem, const ModelParams& p) {
  BoundReport r;
  r.theorem = theorem;
  r.params = p;
  return r;
}

void finish(BoundReport& r, bool stochastic) {
  r.margin = std::min(r.value - r.lower, r.upper - r.value);
  r.verdict = decide(r.value, r.std_error, r.lower, r.upper, stochastic);
}

// Running worst-case ratios for the sampling suites.
struct SuiteAccumulator {
  std::uint64_t n = 0;
  std::uint64_t violations = 0;
  std::uint64_t violations_b = 0;
  double max_ratio = 0.0;
  double max_ratio_b = 0.0;
  double min_ratio = kInf;
  void merge(const SuiteAccumulator& o) {
    n += o.n;
    violations += o.violations;
    violations_b += o.violations_b;
    max_ratio = std::max(max_ratio, o.max_ratio);
    max_ratio_b = std::max(max_ratio_b, o.max_ratio_b);
    min_ratio = std::min(min_ratio, o.min_ratio);
  }
};

// Quaternion product for SU(2) points.
su2::GroupPoint qmul(const su2::GroupPoint& a, const su2::GroupPoint& b) {
  // (a0 + i a.s)(b0 + i b.s) = a0b0 - a.b + i(a0 b + b0 a - a x b)
  su2::GroupPoint c;
  c.w0 = a.w0 * b.w0 - (a.w[0] * b.w[0] + a.w[1] * b.w[1] + a.w[2] * b.w[2]);
  c.w[0] = a.w0 * b.w[0] + b.w0 * a.w[0] - (a.w[1] * b.w[2] - a.w[2] * b.w[1]);
  c.w[1] = a.w0 * b.w[1] + b.w0 * a.w[1] - (a.w[2] * b.w[0] - a.w[0] * b.w[2]);
  c.w[2] = a.w0 * b.w[2] + b.w0 * a.w[2] - (a.w[0] * b.w[1] - a.w[1] * b.w[0]);
  return c;
}

su2::GroupPoint qinv(const su2::GroupPoint& a) { return su2::GroupPoint{a.w0, {-a.w[0], -a.w[1], -a.w[2]}}; }

su2::GroupPoint sample_su2(SampleStream& rng, std::normal_distribution<double>& normal) {
  su2::GroupPoint p;
  double r2;
  do {
    p.w0 = normal(rng);
    for (auto& w : p.w) w = normal(rng);
    r2 = p.w0 * p.w0 + p.w[0] * p.w[0] + p.w[1] * p.w[1] + p.w[2] * p.w[2];
  } while (r2 < 1e-300);
  const double inv = 1.0 / std::sqrt(r2);
  p.w0 *= inv;
  for (auto& w : p.w) w *= inv;
  return p;
}

// Random subset of {0,1,2,3} of size k as a bit mask.
unsigned random_subset(int k, SampleStream& rng) {
  static const std::vector<unsigned> masks[5] = {
      {0u}, {1u, 2u, 4u, 8u}, {3u, 5u, 6u, 9u, 10u, 12u}, {7u, 11u, 13u, 14u}, {15u}};
  const auto& m = masks[k];
  return m[static_cast<std::size_t>(rng.uniform() * m.size()) % m.size()];
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict decide(double value, double std_error, double lower, double upper, bool stochastic, double max_log_error) {
  if (!std::isfinite(value)) return Verdict::Fail;
  if (!stochastic) {
    const double tol_u = 1e-8 * std::max(1.0, std::abs(upper));
    const double tol_l = 1e-8 * std::max(1.0, std::abs(lower));
    return (value <= upper + tol_u && value >= lower - tol_l) ? Verdict::Pass : Verdict::Fail;
  }
  if (value - 3.0 * std_error > upper || value + 3.0 * std_error < lower) return Verdict::Fail;
  if (!(std_error <= max_log_error)) return Verdict::Inconclusive;
  return Verdict::Pass;
}

BoundConstants compute_constants(const ModelParams& p) {
  p.validate();
  BoundConstants c;
  c.d = p.d;
  c.L = p.L;
  c.N = p.N;
  c.group = p.group;
  c.field = p.field;
  c.g0_sq = p.g0_sq;

  const int n_real = p.field_components() * (p.field == FieldKind::Complex ? 2 : 1);
  c.c_b_upper = n_real * (1.0 - 1.0 / p.L) * std::log(2.0) / 2.0;
  c.c_b_lower = 0.0;

  const int N = p.N;
  if (p.group == GroupKind::U) {
    const double n2 = static_cast<double>(N) * N;
    c.c_y_upper = n2 * std::log(kPi / (2.0 * std::sqrt(2.0))) + std::log(gue_integral(kInf, N));
    const double k0 = 2.0 * (p.d - 1) * 4.0 * N;  // quadratic coefficient at a = 1, g = 1
    c.i_lower = gue_integral(std::sqrt(k0 / p.g0_sq) * kPi / 2.0, N);
    c.c_y_lower = -log_cue_normalization(N) + 0.5 * N * (N - 1) * std::log(4.0 / (kPi * kPi)) -
                  0.5 * n2 * std::log(k0) + std::log(c.i_lower);
  } else if (N == 2) {
    c.c_y_upper = std::log((kPi * kPi / 4.0) * su2::kCapitalEInf);
    const double k0 = 2.0 * (p.d - 1) * 8.0;
    c.i_lower = su2::capital_e(std::sqrt(k0 / p.g0_sq) * kPi / 2.0);
    c.c_y_lower = std::log(8.0 / (kPi * kPi * kPi)) - 1.5 * std::log(k0) + std::log(c.i_lower);
  } else {
    throw InvalidArgument("pure-gauge constants are available for U(N) and SU(2) only");
  }

  const Lattice lat(p.d, p.L, p.a);
  const double ratio = log_retained_ratio(lat);
  c.c_upper = c.c_b_upper + c.c_y_upper * ratio;
  c.c_lower = c.c_b_lower + c.c_y_lower * ratio;
  c.c_upper_uniform = c.c_b_upper + std::max(0.0, p.d * c.c_y_upper);
  c.c_lower_uniform = c.c_b_lower + std::min(0.0, p.d * c.c_y_lower);
  return c;
}

BoundReport verify_theorem1(const ModelParams& params, const Theorem1Options& opts) {
  params.validate();
  const BoundConstants c = compute_constants(params);
  auto lat = std::make_shared<const Lattice>(params.d, params.L, params.a);
  BoundReport r = make_report("theorem1", params);
  r.lower = c.c_b_lower * lat->num_sites();
  r.upper = c.c_b_upper * lat->num_sites();

  struct ConfigResult {
    double log_zb = 0.0;
    double log_det = 0.0;
  };
  auto results = parallel_map<ConfigResult>(static_cast<std::size_t>(opts.n_configs), opts.workers, [&](std::size_t i) {
    SampleStream rng(opts.seed, i);
    const GaugeConfig cfg = GaugeConfig::random(lat, params.group, params.N, rng);
    const QuadraticForm q = assemble_quadratic_form(cfg, params, true);
    const LogDet ld = log_determinant(q);
    return ConfigResult{(params.field == FieldKind::Real ? -0.5 : -1.0) * ld.log_det, ld.log_det};
  });

  double lo = kInf, hi = -kInf, max_log_det = -kInf;
  for (const auto& res : results) {
    lo = std::min(lo, res.log_zb);
    hi = std::max(hi, res.log_zb);
    max_log_det = std::max(max_log_det, res.log_det);
    const bool ok = res.log_zb >= r.lower - 1e-12 && res.log_zb <= r.upper + 1e-12 && res.log_det <= 1e-12;
    if (!ok) ++r.violations;
  }
  r.samples = results.size();
  r.value = hi;
  finish(r, false);
  if (r.violations > 0) r.verdict = Verdict::Fail;
  r.margin = std::min(lo - r.lower, r.upper - hi);
  r.extras = {{"min_log_z_b", lo}, {"max_log_z_b", hi}, {"spread", hi - lo}, {"max_log_det_q", max_log_det},
              {"c_b_upper", c.c_b_upper}};
  return r;
}

BoundReport verify_theorem2(const ModelParams& params, const Theorem2Options& opts) {
  params.validate();
  const BoundConstants c = compute_constants(params);
  const Lattice lat(params.d, params.L, params.a);
  const int lr = lat.num_retained();
  const int dn = lie_dimension(params.group, params.N);
  const ScalingFactors s = scaling_factors(params);
  BoundReport r = make_report("theorem2", params);
  r.lower = c.c_y_lower * lr;
  r.upper = c.c_y_upper * lr;

  bool stochastic = false;
  double log_zw = 0.0;
  if (params.d == 2) {
    // Z^w factorizes into one single-bond integral per plaquette.
    const double z = params.group == GroupKind::SU && params.N == 2 ? su2::su2_z_weyl(params.a, params.g2, params.d)
                                                                    : z_single_bond(params, BondVariant::Z);
    log_zw = lat.num_plaquettes() * std::log(z);
    r.detail = "exact single-bond factorization";
    const double scaled_z = std::pow(s.s_y, dn) * z;
    r.extras.push_back({"scaled_single_bond", scaled_z});
    if (params.group == GroupKind::U) {
      // z <= (g^2 a^{4-d})^{N^2/2} (pi^2/2)^{N^2} N_G/N_C
      const double n2 = static_cast<double>(params.N) * params.N;
      const EnsembleConstants ec = ensemble_constants(params.N);
      const double direct = std::pow(params.g2 * std::pow(params.a, 4 - params.d), n2 / 2.0) *
                            std::pow(kPi * kPi / 2.0, n2) * ec.ratio;
      r.extras.push_back({"direct_single_bond_bound_ok", z <= direct ? 1.0 : 0.0});
    }
  } else {
    McOptions mc;
    mc.n_samples = opts.n_samples;
    mc.seed = opts.seed;
    mc.workers = opts.workers;
    mc.gauge_fixed = true;
    const Estimate e = z_wilson_mc(lat, params, mc);
    log_zw = e.log_value;
    r.std_error = e.log_std_error;
    r.samples = e.n_samples;
    stochastic = true;
    r.detail = "Monte Carlo, gauge fixed";
  }
  r.value = dn * static_cast<double>(lr) * std::log(s.s_y) + log_zw;
  r.extras.push_back({"c_y_upper", c.c_y_upper});
  r.extras.push_back({"c_y_lower", c.c_y_lower});
  finish(r, stochastic);
  return r;
}

BoundReport verify_theorem3(const ModelParams& params, const Theorem3Options& opts) {
  params.validate();
  const BoundConstants c = compute_constants(params);
  const Lattice lat(params.d, params.L, params.a);
  const int ls = lat.num_sites();
  BoundReport r = make_report("theorem3", params);
  r.lower = c.c_lower * ls;
  r.upper = c.c_upper * ls;

  double log_zu, log_zw, min_zb, max_zb;
  bool stochastic = false;
  if (params.d == 2 && params.group == GroupKind::U && params.N == 1 && params.L <= 3) {
    const FullModelResult f = z_full_quadrature_d2(lat, params, opts.nodes_per_axis);
    log_zu = f.log_z_u;
    log_zw = f.log_z_w;
    min_zb = f.min_log_z_b;
    max_zb = f.max_log_z_b;
    r.samples = f.evaluations;
    r.detail = "plaquette-angle quadrature";
  } else {
    McOptions mc;
    mc.n_samples = opts.n_samples;
    mc.seed = opts.seed;
    mc.workers = opts.workers;
    mc.gauge_fixed = true;
    const FullModelMc f = z_full_mc(lat, params, mc);
    log_zu = f.z_u.log_value;
    log_zw = f.z_w.log_value;
    min_zb = f.min_log_z_b;
    max_zb = f.max_log_z_b;
    r.std_error = f.z_u.log_std_error;
    r.samples = f.z_u.n_samples;
    stochastic = true;
    r.detail = "Monte Carlo, gauge fixed";
  }
  // the identity configuration belongs to every sampled set
  {
    auto lp = std::make_shared<const Lattice>(lat);
    const double id = z_bose_exact(GaugeConfig::identity(lp, params.N), params, true).log_value;
    min_zb = std::min(min_zb, id);
    max_zb = std::max(max_zb, id);
  }
  UnscaledInputs in;
  in.log_z_u = log_zu;
  const ScaledPartition sp = assemble_scaled(params, lat, in);
  r.value = sp.log_z;

  // min Z_B Z^w <= s_B^n Z^u <= max Z_B Z^w over the same node or sample set
  const int n_real = params.field_components() * ls * (params.field == FieldKind::Complex ? 2 : 1);
  const double mid = n_real * std::log(scaling_factors(params).s_b) + log_zu;
  const double tol = 1e-10 * std::max(1.0, std::abs(mid));
  const bool sandwich = min_zb + log_zw <= mid + tol && mid <= max_zb + log_zw + tol;
  const double free_energy = r.value / ls;
  const bool uniform_ok = free_energy >= c.c_lower_uniform - 1e-12 && free_energy <= c.c_upper_uniform + 1e-12;
  r.extras = {{"free_energy_per_site", free_energy}, {"c_lower", c.c_lower}, {"c_upper", c.c_upper},
              {"c_lower_uniform", c.c_lower_uniform}, {"c_upper_uniform", c.c_upper_uniform},
              {"sandwich_ok", sandwich ? 1.0 : 0.0}, {"uniform_ok", uniform_ok ? 1.0 : 0.0},
              {"min_log_z_b", min_zb}, {"max_log_z_b", max_zb}, {"log_z_w", log_zw}};
  finish(r, stochastic);
  if (r.verdict == Verdict::Pass && (!sandwich || !uniform_ok)) r.verdict = Verdict::Fail;
  return r;
}

BoundReport verify_quadratic_lemma(GroupKind kind, int N, int k, const LemmaOptions& opts) {
  if (k < 1 || k > 4) throw InvalidArgument("k must be 1..4");
  ModelParams p;
  p.N = N;
  p.group = kind;
  BoundReport r = make_report("quadratic_lemma", p);
  const double n = N;
  const bool u1 = kind == GroupKind::U && N == 1;
  const bool su2 = kind == GroupKind::SU && N == 2;

  auto acc = chunked_reduce<SuiteAccumulator>(opts.n_samples, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    SuiteAccumulator a;
    std::normal_distribution<double> normal;
    std::array<CMatrix, 4> g;
    for (std::uint64_t i = begin; i < end; ++i) {
      SampleStream rng(opts.seed, i);
      const unsigned mask = random_subset(k, rng);
      double action = 0.0, lam2 = 0.0;
      if (u1) {
        std::array<double, 4> th{0.0, 0.0, 0.0, 0.0};
        for (int j = 0; j < 4; ++j)
          if (mask & (1u << j)) {
            th[j] = kPi * (2.0 * rng.uniform() - 1.0);
            lam2 += th[j] * th[j];
          }
        const double h = std::sin(0.5 * (th[0] + th[1] - th[2] - th[3]));
        action = 4.0 * h * h;
      } else if (su2) {
        std::array<su2::GroupPoint, 4> q;
        for (int j = 0; j < 4; ++j) {
          if (mask & (1u << j)) {
            q[j] = sample_su2(rng, normal);
            const double alpha = std::atan2(su2::norm(q[j].w), q[j].w0);
            lam2 += 2.0 * alpha * alpha;
          }
        }
        const su2::GroupPoint gp = qmul(qmul(q[0], q[1]), qmul(qinv(q[2]), qinv(q[3])));
        action = 4.0 * (1.0 - gp.w0);  // 2 Re Tr(1 - g_p)
      } else {
        for (int j = 0; j < 4; ++j) {
          if (mask & (1u << j)) {
            g[j] = haar_sample(kind, N, rng).matrix();
            for (double l : angular_eigenvalues(g[j])) lam2 += l * l;
          } else {
            g[j] = CMatrix::Identity(N, N);
          }
        }
        const CMatrix gp = g[0] * g[1] * g[2].adjoint() * g[3].adjoint();
        action = 2.0 * (n - gp.trace().real());
      }
      const double bound = k * n * lam2;
      if (action > bound * (1.0 + 1e-12) + 1e-14) ++a.violations;
      if (action > 4.0 * n * (1.0 + 1e-12)) ++a.violations_b;
      if (bound > 0.0) a.max_ratio = std::max(a.max_ratio, action / bound);
      a.max_ratio_b = std::max(a.max_ratio_b, action / (4.0 * n));
      ++a.n;
    }
    return a;
  });
  r.samples = acc.n;
  r.violations = acc.violations + acc.violations_b;
  r.value = acc.max_ratio;
  r.lower = 0.0;
  r.upper = 1.0;
  r.extras = {{"k", static_cast<double>(k)},
              {"quadratic_violations", static_cast<double>(acc.violations)},
              {"global_violations", static_cast<double>(acc.violations_b)},
              {"max_action_over_4N", acc.max_ratio_b}};
  r.margin = 1.0 - acc.max_ratio;
  r.verdict = r.violations == 0 ? Verdict::Pass : Verdict::Fail;
  std::ostringstream os;
  os << to_string(kind) << "(" << N << "), k=" << k;
  r.detail = os.str();
  return r;
}

BoundReport verify_norm_inequalities(int N, const LemmaOptions& opts) {
  if (N < 1) throw InvalidArgument("N must be >= 1");
  ModelParams p;
  p.N = N;
  BoundReport r = make_report("norm_inequalities", p);
  const double root_n = std::sqrt(static_cast<double>(N));
  auto acc = chunked_reduce<SuiteAccumulator>(opts.n_samples, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    SuiteAccumulator a;
    std::normal_distribution<double> normal;
    CMatrix m(N, N);
    for (std::uint64_t i = begin; i < end; ++i) {
      SampleStream rng(opts.seed, i);
      for (int c = 0; c < N; ++c)
        for (int row = 0; row < N; ++row) {
          const double re = normal(rng);
          const double im = normal(rng);
          m(row, c) = Complex(re, im);
        }
      const double hs = hs_norm(m);
      const double op = op_norm(m);
      if (op > hs * (1.0 + 1e-12)) ++a.violations;
      if (hs / root_n > op * (1.0 + 1e-12)) ++a.violations_b;
      a.max_ratio = std::max(a.max_ratio, op / hs);
      a.min_ratio = std::min(a.min_ratio, op * root_n / hs);
      ++a.n;
    }
    return a;
  });
  r.samples = acc.n;
  r.violations = acc.violations + acc.violations_b;
  r.value = acc.max_ratio;
  r.lower = 1.0 / root_n;
  r.upper = 1.0;
  r.margin = std::min(acc.min_ratio - 1.0, 1.0 - acc.max_ratio);
  r.extras = {{"max_op_over_hs", acc.max_ratio}, {"min_sqrtN_op_over_hs", acc.min_ratio}};
  r.verdict = r.violations == 0 ? Verdict::Pass : Verdict::Fail;
  return r;
}

}  // namespace latstab
