#include "latstab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "latstab/error.hpp"
#include "latstab/haar_weyl.hpp"
#include "latstab/parallel.hpp"
#include "latstab/quadrature.hpp"

namespace latstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2Pi = 1.8378770664093454836;

double site_coefficient(const ModelParams& p, bool scaled) {
  if (scaled) return 1.0;
  return 2.0 * p.d * p.kappa_u2 * std::pow(p.a, p.d - 2) + std::pow(p.a, p.d) * p.m_u * p.m_u;
}

double bond_coefficient(const ModelParams& p, bool scaled) {
  if (scaled) return scaling_factors(p).kappa2;
  return p.kappa_u2 * std::pow(p.a, p.d - 2);
}

int real_dimension(const ModelParams& p, int sites) {
  return p.field_components() * sites * (p.field == FieldKind::Complex ? 2 : 1);
}

// Real symmetric form equivalent to a Hermitian one (R, I ordering per entry).
Eigen::MatrixXd real_embedding(const QuadraticForm& q) {
  if (q.kind == FieldKind::Real) return q.matrix.real();
  const int n = q.size();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = q.matrix.real();
  m.topRightCorner(n, n) = -q.matrix.imag();
  m.bottomLeftCorner(n, n) = q.matrix.imag();
  m.bottomRightCorner(n, n) = q.matrix.real();
  return m;
}

template <class Matrix>
LogDet cholesky_log_det(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  LogDet out;
  if (llt.info() == Eigen::Success) {
    const auto& l = llt.matrixLLT();
    double s = 0.0, min_pivot = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.rows(); ++i) {
      const double d = std::real(l(i, i));
      s += std::log(d);
      min_pivot = std::min(min_pivot, d * d);
    }
    out.log_det = 2.0 * s;
    out.min_pivot = min_pivot;
    return out;
  }
  Eigen::LDLT<Matrix> ldlt(m);
  const double min_pivot = ldlt.vectorD().real().minCoeff();
  throw NumericError("quadratic form is not positive definite (smallest pivot " + std::to_string(min_pivot) +
                     "); kappa^2 inadmissible or boundary assumption broken");
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::ExactDeterminant: return "exact-determinant";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

const char* to_string(BondVariant v) {
  switch (v) {
    case BondVariant::Z: return "z";
    case BondVariant::Z1: return "z1";
    case BondVariant::ZCheck: return "z_check";
  }
  return "?";
}

QuadraticForm assemble_quadratic_form(const GaugeConfig& cfg, const ModelParams& params, bool scaled) {
  const Lattice& lat = *cfg.lattice;
  const int n = cfg.n;
  if (n != params.N) throw InvalidArgument("gauge configuration N does not match model N");
  const int comps = params.field_components();
  const int flavors = params.n_f;
  const int dim = comps * lat.num_sites();
  const double cs = site_coefficient(params, scaled);
  const double cb = bond_coefficient(params, scaled);

  QuadraticForm q;
  q.kind = params.field;
  q.matrix = Eigen::MatrixXcd::Identity(dim, dim) * cs;
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const Bond& bond = lat.bond(b);
    const CMatrix g = params.field == FieldKind::Real ? CMatrix(cfg.links[b].real().cast<Complex>()) : cfg.links[b];
    for (int f = 0; f < flavors; ++f) {
      const int r = bond.site * comps + f * n, c = bond.target * comps + f * n;
      q.matrix.block(r, c, n, n) -= cb * g;
      q.matrix.block(c, r, n, n) -= cb * g.adjoint();
    }
  }
  double gmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i) {
    double off = 0.0;
    for (int j = 0; j < dim; ++j)
      if (j != i) off += std::abs(q.matrix(i, j));
    gmin = std::min(gmin, q.matrix(i, i).real() - off);
  }
  q.gershgorin_min = gmin;
  return q;
}

LogDet log_determinant(const QuadraticForm& q) {
  if (q.kind == FieldKind::Real) return cholesky_log_det<Eigen::MatrixXd>(q.matrix.real());
  return cholesky_log_det<Eigen::MatrixXcd>(q.matrix);
}

Estimate z_bose_exact(const GaugeConfig& cfg, const ModelParams& params, bool scaled) {
  const QuadraticForm q = assemble_quadratic_form(cfg, params, scaled);
  const LogDet ld = log_determinant(q);
  const double power = params.field == FieldKind::Real ? -0.5 : -1.0;
  return Estimate::exact(power * ld.log_det, Method::ExactDeterminant);
}

ScalingIdentityReport z_bose_scaling_identity(const GaugeConfig& cfg, const ModelParams& params) {
  ScalingIdentityReport r;
  r.log_z_scaled = z_bose_exact(cfg, params, true).log_value;
  r.log_z_unscaled = z_bose_exact(cfg, params, false).log_value;
  r.log_factor = real_dimension(params, cfg.lattice->num_sites()) * std::log(scaling_factors(params).s_b);
  r.rel_error = std::abs(std::expm1(r.log_factor + r.log_z_unscaled - r.log_z_scaled));
  return r;
}

double z_bose_brute_force(const QuadraticForm& q, int nodes_per_axis, double cutoff) {
  const Eigen::MatrixXd m = real_embedding(q);
  const int n = static_cast<int>(m.rows());
  if (n > 4) throw InvalidArgument("z_bose_brute_force: at most 4 real dimensions");
  const Rule1D rule = composite_gauss_legendre(-cutoff, cutoff, nodes_per_axis);
  Eigen::VectorXd psi(n);
  const double sum = tensor_sum(rule, n, [&](std::span<const double> x) {
    for (int i = 0; i < n; ++i) psi(i) = x[i];
    return std::exp(-0.5 * psi.dot(m * psi));
  });
  return sum * std::exp(-0.5 * n * kLog2Pi);
}

Estimate z_bose_mc(const QuadraticForm& q, std::uint64_t n_samples, std::uint64_t seed, int workers) {
  const Eigen::MatrixXd m = real_embedding(q);
  const int n = static_cast<int>(m.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (!(lmin > 0.0)) throw NumericError("z_bose_mc: form not positive definite");
  // psi ~ N(0, I/lmin) makes the importance weight bounded by lmin^{-n/2}
  const double sigma = 1.0 / std::sqrt(lmin);
  const Eigen::MatrixXd shifted = m - lmin * Eigen::MatrixXd::Identity(n, n);
  const double log_norm = -0.5 * n * std::log(lmin);
  auto acc = chunked_reduce<LogMeanAccumulator>(n_samples, workers, [&](std::uint64_t begin, std::uint64_t end) {
    LogMeanAccumulator a;
    Eigen::VectorXd psi(n);
    std::normal_distribution<double> normal;
    for (std::uint64_t i = begin; i < end; ++i) {
      SampleStream rng(seed, i);
      for (int k = 0; k < n; ++k) psi(k) = sigma * normal(rng);
      a.add(log_norm - 0.5 * psi.dot(shifted * psi));
    }
    return a;
  });
  return acc.to_estimate(seed);
}

double chain_partition(int L, int N, int d, double kappa2, const std::vector<CMatrix>& gauges, FieldKind kind) {
  if (L < 2) throw InvalidArgument("chain_partition: L must be >= 2");
  if (static_cast<int>(gauges.size()) != L - 1) throw InvalidArgument("chain_partition: need L-1 bond matrices");
  const int dim = L * N;
  QuadraticForm q;
  q.kind = kind;
  q.matrix = Eigen::MatrixXcd::Identity(dim, dim);
  const double c = d * kappa2;
  for (int j = 0; j + 1 < L; ++j) {
    const CMatrix g = kind == FieldKind::Real ? CMatrix(gauges[j].real().cast<Complex>()) : gauges[j];
    q.matrix.block(j * N, (j + 1) * N, N, N) -= c * g;
    q.matrix.block((j + 1) * N, j * N, N, N) -= c * g.adjoint();
  }
  const LogDet ld = log_determinant(q);
  return (kind == FieldKind::Real ? -0.5 : -1.0) * ld.log_det;
}

double chain_partition_transfer(int L, int d, double kappa2, int grid, double cutoff) {
  const Rule1D rule = composite_gauss_legendre(-cutoff, cutoff, grid);
  const int m = static_cast<int>(rule.size());
  const double c = d * kappa2;
  Eigen::MatrixXd t(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double x = rule.nodes[i], y = rule.nodes[j];
      t(i, j) = std::exp(-0.25 * x * x + c * x * y - 0.25 * y * y) * rule.weights[j];
    }
  Eigen::VectorXd v(m), h(m);
  for (int i = 0; i < m; ++i) h(i) = std::exp(-0.25 * rule.nodes[i] * rule.nodes[i]);
  v = h;
  for (int k = 0; k + 1 < L; ++k) v = t * v;
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += rule.weights[i] * h(i) * v(i);
  return std::log(s) - 0.5 * L * kLog2Pi;
}

HolmgrenReport holmgren_bound_check(int N, double dkappa2, int grid, double cutoff, std::uint64_t seed) {
  HolmgrenReport r;
  r.N = N;
  r.bound = std::pow(4.0 * kPi, 0.5 * N);
  // N = 1 kernel on a uniform midpoint grid; the operator is symmetric.
  const double h = 2.0 * cutoff / grid;
  Eigen::MatrixXd k(grid, grid);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double x = -cutoff + (i + 0.5) * h, y = -cutoff + (j + 0.5) * h;
      k(i, j) = std::exp(-0.25 * x * x + dkappa2 * x * y - 0.25 * y * y) * h;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  const double sv1 = es.eigenvalues().cwiseAbs().maxCoeff();
  r.largest_singular_value = std::pow(sv1, N);  // tensor product for N components

  // Complex embedding L = M + conj(M) = 2 [[A, -B], [B, A]] for g = A + iB.
  double residual = 0.0, row = 0.0;
  std::normal_distribution<double> normal;
  for (std::uint64_t s = 0; s < 16; ++s) {
    SampleStream rng(seed, s);
    const CMatrix g = haar_sample(GroupKind::U, N, rng).matrix();
    const Eigen::MatrixXd A = g.real(), B = g.imag();
    Eigen::MatrixXd l(2 * N, 2 * N);
    l << 2.0 * A, -2.0 * B, 2.0 * B, 2.0 * A;
    residual = std::max(residual, (l.transpose() * l - 4.0 * Eigen::MatrixXd::Identity(2 * N, 2 * N)).cwiseAbs().maxCoeff());
    // sup over phi of e^{-|phi|^2/4} int e^{(phi, L phi2)/4 - |phi2|^2/4} dphi2 / (2 pi)^N
    Eigen::VectorXd phi(2 * N);
    for (int i = 0; i < 2 * N; ++i) phi(i) = 3.0 * normal(rng);
    const Eigen::VectorXd b = l.transpose() * phi / 4.0;
    const double log_val = N * std::log(4.0 * kPi) + b.squaredNorm() - 0.25 * phi.squaredNorm() - N * std::log(2.0 * kPi);
    row = std::max(row, std::exp(log_val));
  }
  r.embedding_residual = residual;
  r.complex_row_integral = row;
  return r;
}

namespace {

double u1_plaquette_sum(const Lattice& lat, const std::vector<double>& theta) {
  double s = 0.0;
  for (const auto& p : lat.plaquettes()) {
    const double phase = theta[p.bonds[0]] + theta[p.bonds[1]] - theta[p.bonds[2]] - theta[p.bonds[3]];
    const double h = std::sin(0.5 * phase);
    s += 4.0 * h * h;
  }
  return s;
}

}  // namespace

Estimate z_wilson_mc(const Lattice& lattice, const ModelParams& params, const McOptions& opts) {
  const GaugeFixing fixing = enhanced_temporal_gauge(lattice);
  const double c = params.gauge_coefficient();
  const int n = params.N;
  const GroupKind kind = params.group;
  const bool fixed = opts.gauge_fixed;
  const bool u1 = kind == GroupKind::U && n == 1;
  auto acc = chunked_reduce<LogMeanAccumulator>(opts.n_samples, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    LogMeanAccumulator a;
    std::vector<double> theta(lattice.num_bonds(), 0.0);
    std::vector<CMatrix> links(lattice.num_bonds(), CMatrix::Identity(n, n));
    const CMatrix id = CMatrix::Identity(n, n);
    for (std::uint64_t i = begin; i < end; ++i) {
      SampleStream rng(opts.seed, i);
      double action = 0.0;
      if (u1) {
        for (int b = 0; b < lattice.num_bonds(); ++b)
          theta[b] = (fixed && fixing.in_tree[b]) ? 0.0 : kPi * (2.0 * rng.uniform() - 1.0);
        action = u1_plaquette_sum(lattice, theta);
      } else {
        for (int b = 0; b < lattice.num_bonds(); ++b)
          links[b] = (fixed && fixing.in_tree[b]) ? id : haar_sample(kind, n, rng).matrix();
        for (const auto& p : lattice.plaquettes()) {
          const CMatrix gp = links[p.bonds[0]] * links[p.bonds[1]] * links[p.bonds[2]].adjoint() * links[p.bonds[3]].adjoint();
          action += 2.0 * (n - gp.trace().real());
        }
      }
      a.add(-c * action);
    }
    return a;
  });
  return acc.to_estimate(opts.seed);
}

Estimate z_wilson_quadrature_u1(const Lattice& lattice, const ModelParams& params, bool gauge_fixed, int nodes_per_axis) {
  if (!(params.group == GroupKind::U && params.N == 1)) throw InvalidArgument("z_wilson_quadrature_u1 needs U(1)");
  const GaugeFixing fixing = enhanced_temporal_gauge(lattice);
  std::vector<int> free_bonds;
  for (int b = 0; b < lattice.num_bonds(); ++b)
    if (!gauge_fixed || !fixing.in_tree[b]) free_bonds.push_back(b);
  const int dim = static_cast<int>(free_bonds.size());
  if (dim > 6) throw InvalidArgument("z_wilson_quadrature_u1: too many integration angles");
  // periodic trapezoid rule, normalized Haar weights
  Rule1D rule;
  for (int k = 0; k < nodes_per_axis; ++k) {
    rule.nodes.push_back(-kPi + 2.0 * kPi * (k + 0.5) / nodes_per_axis);
    rule.weights.push_back(1.0 / nodes_per_axis);
  }
  const double c = params.gauge_coefficient();
  std::vector<double> theta(lattice.num_bonds(), 0.0);
  const double z = tensor_sum(rule, dim, [&](std::span<const double> x) {
    for (int i = 0; i < dim; ++i) theta[free_bonds[i]] = x[i];
    return std::exp(-c * u1_plaquette_sum(lattice, theta));
  });
  Estimate e = Estimate::exact(std::log(z), Method::Quadrature);
  e.n_samples = static_cast<std::uint64_t>(std::pow(nodes_per_axis, dim));
  return e;
}

double z_single_bond(const ModelParams& params, BondVariant variant) {
  const int n = params.N;
  const double c = params.gauge_coefficient();
  const double k = c * 2.0 * (params.d - 1) * 4.0 * n;
  switch (variant) {
    case BondVariant::Z: {
      WeylQuadrature q;
      q.half_width = kPi * std::sqrt(12.5 / c);
      return weyl_integrate([c](std::span<const double> l) { return std::exp(-c * single_bond_action_eigen(l)); }, n,
                            params.group, q);
    }
    case BondVariant::Z1: {
      WeylQuadrature q;
      q.half_width = std::sqrt(50.0 / k);
      return weyl_integrate(
          [k](std::span<const double> l) {
            double s = 0.0;
            for (double v : l) s += v * v;
            return std::exp(-k * s);
          },
          n, params.group, q);
    }
    case BondVariant::ZCheck: {
      if (params.group != GroupKind::U) throw InvalidArgument("z_check is defined for U(N); use the SU(2) routines");
      if (n >= 4) throw InvalidArgument("z_check: quadrature refused for N >= 4");
      const double w = std::min(kPi / 2.0, std::sqrt(50.0 / k));
      const Rule1D rule = composite_gauss_legendre(-w, w, n <= 2 ? 256 : 96);
      const double sum = tensor_sum(rule, n, [k](std::span<const double> l) {
        double s = 0.0;
        for (double v : l) s += v * v;
        return std::exp(-k * s) * gue_density(l);
      });
      return sum * std::pow(4.0 / (kPi * kPi), 0.5 * n * (n - 1)) / cue_normalization(n);
    }
  }
  throw InvalidArgument("unknown single-bond variant");
}

ScaledPartition assemble_scaled(const ModelParams& params, const Lattice& lattice, const UnscaledInputs& in) {
  const ScalingFactors s = scaling_factors(params);
  const double log_sb = real_dimension(params, lattice.num_sites()) * std::log(s.s_b);
  const double log_sy = lie_dimension(params.group, params.N) * static_cast<double>(lattice.num_retained()) * std::log(s.s_y);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ScaledPartition out;
  out.log_z_y = in.log_z_w ? log_sy + *in.log_z_w : nan;
  out.log_z_b = in.log_z_b_u ? log_sb + *in.log_z_b_u : nan;
  out.log_z = in.log_z_u ? log_sb + log_sy + *in.log_z_u : nan;
  return out;
}

FullModelResult z_full_quadrature_d2(const Lattice& lattice, const ModelParams& params, int nodes_per_axis) {
  if (lattice.d() != 2 || params.group != GroupKind::U || params.N != 1)
    throw InvalidArgument("z_full_quadrature_d2 needs d = 2 and U(1)");
  if (lattice.L() > 3) throw InvalidArgument("z_full_quadrature_d2: L <= 3 only");
  auto lat = std::make_shared<const Lattice>(lattice);
  const int L = lattice.L();
  const int dim = (L - 1) * (L - 1);
  const double c = params.gauge_coefficient();
  const double w = std::min(kPi, kPi * std::sqrt(5.0 / c));
  const Rule1D rule = composite_gauss_legendre(-w, w, nodes_per_axis);
  const double log_sb = real_dimension(params, lattice.num_sites()) * std::log(scaling_factors(params).s_b);

  GaugeConfig cfg = GaugeConfig::identity(lat, 1);
  FullModelResult r;
  r.min_log_z_b = std::numeric_limits<double>::infinity();
  r.max_log_z_b = -std::numeric_limits<double>::infinity();
  auto track = [&](double log_zb_scaled) {
    r.min_log_z_b = std::min(r.min_log_z_b, log_zb_scaled);
    r.max_log_z_b = std::max(r.max_log_z_b, log_zb_scaled);
  };
  track(z_bose_exact(cfg, params, true).log_value);

  // Plaquette angle theta(t, j) sits at base (t, j). The retained bond b_1(t, j),
  // t >= 2, carries u(t, j) = sum_{s < t} theta(s, j); the Jacobian is 1.
  std::vector<int> retained_bond((L + 1) * L, -1);
  for (int t = 2; t <= L; ++t)
    for (int j = 1; j <= L - 1; ++j) retained_bond[t * L + j] = lattice.bond_index(lattice.site_index({t, j, 0, 0}), 1);

  LogMeanAccumulator sum_u, sum_w;
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> th(dim);
  const std::size_t m = rule.size();
  for (;;) {
    double log_wt = 0.0, action = 0.0;
    for (int k = 0; k < dim; ++k) {
      th[k] = rule.nodes[idx[k]];
      log_wt += std::log(rule.weights[idx[k]]);
      const double h = std::sin(0.5 * th[k]);
      action += 4.0 * h * h;
    }
    for (int j = 1; j <= L - 1; ++j) {
      double u = 0.0;
      for (int t = 2; t <= L; ++t) {
        u += th[(t - 2) * (L - 1) + (j - 1)];
        cfg.links[retained_bond[t * L + j]](0, 0) = std::polar(1.0, u);
      }
    }
    const double log_zbu = z_bose_exact(cfg, params, false).log_value;
    track(log_zbu + log_sb);
    sum_u.add(log_wt + log_zbu - c * action);
    sum_w.add(log_wt - c * action);
    ++r.evaluations;
    int k = dim - 1;
    while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
    if (k < 0) break;
  }
  const double log_haar = -dim * std::log(2.0 * kPi);
  r.log_z_u = log_haar + sum_u.shift + std::log(sum_u.s1);
  r.log_z_w = log_haar + sum_w.shift + std::log(sum_w.s1);
  return r;
}

namespace {

struct FullMcAccumulator {
  LogMeanAccumulator acc;
  LogMeanAccumulator acc_w;
  double min_log = std::numeric_limits<double>::infinity();
  double max_log = -std::numeric_limits<double>::infinity();
  void merge(const FullMcAccumulator& o) {
    acc.merge(o.acc);
    acc_w.merge(o.acc_w);
    min_log = std::min(min_log, o.min_log);
    max_log = std::max(max_log, o.max_log);
  }
};

}  // namespace

FullModelMc z_full_mc(const Lattice& lattice, const ModelParams& params, const McOptions& opts) {
  auto lat = std::make_shared<const Lattice>(lattice);
  const GaugeFixing fixing = enhanced_temporal_gauge(lattice);
  const double log_sb = real_dimension(params, lattice.num_sites()) * std::log(scaling_factors(params).s_b);
  auto total = chunked_reduce<FullMcAccumulator>(opts.n_samples, opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    FullMcAccumulator a;
    GaugeConfig cfg = GaugeConfig::identity(lat, params.N);
    for (std::uint64_t i = begin; i < end; ++i) {
      SampleStream rng(opts.seed, i);
      for (int b : fixing.retained) cfg.links[b] = haar_sample(params.group, params.N, rng).matrix();
      const double log_zbu = z_bose_exact(cfg, params, false).log_value;
      a.min_log = std::min(a.min_log, log_zbu + log_sb);
      a.max_log = std::max(a.max_log, log_zbu + log_sb);
      const double action = wilson_total_action(cfg, params);
      a.acc.add(log_zbu - action);
      a.acc_w.add(-action);
    }
    return a;
  });
  FullModelMc out;
  out.z_u = total.acc.to_estimate(opts.seed);
  out.z_w = total.acc_w.to_estimate(opts.seed);
  out.min_log_z_b = total.min_log;
  out.max_log_z_b = total.max_log;
  return out;
}

}  // namespace latstab
