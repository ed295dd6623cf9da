#include "latstab/actions.hpp"

#include <cmath>
#include <numbers>

#include "latstab/error.hpp"
#include "latstab/haar_weyl.hpp"
#include "latstab/parallel.hpp"

namespace latstab {

namespace {
constexpr double kPi = std::numbers::pi;

// (site coefficient, bond coefficient) of S = 1/2 c_s sum |phi|^2 - c_b sum Re phi(x)^+ g phi(x+e)
std::pair<double, double> bose_coefficients(const ModelParams& p, bool scaled) {
  if (scaled) return {1.0, scaling_factors(p).kappa2};
  const double ad2 = std::pow(p.a, p.d - 2);
  return {2.0 * p.d * p.kappa_u2 * ad2 + std::pow(p.a, p.d) * p.m_u * p.m_u, p.kappa_u2 * ad2};
}

}  // namespace

const char* to_string(FieldKind kind) { return kind == FieldKind::Real ? "real" : "complex"; }

FieldKind parse_field_kind(const std::string& text) {
  if (text == "real") return FieldKind::Real;
  if (text == "complex") return FieldKind::Complex;
  throw InvalidArgument("field must be 'real' or 'complex', got '" + text + "'");
}

void ModelParams::validate() const {
  if (d < 2 || d > 4) throw InvalidArgument("d must be 2, 3 or 4 (got " + std::to_string(d) + ")");
  if (L < 2) throw InvalidArgument("L must be >= 2 (got " + std::to_string(L) + ")");
  if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("a must lie in (0, 1]");
  if (!(g0_sq > 0.0)) throw InvalidArgument("g0^2 must be positive");
  if (!(g2 > 0.0 && g2 <= g0_sq)) throw InvalidArgument("g^2 must lie in (0, g0^2]");
  if (!(kappa_u2 >= 0.0)) throw InvalidArgument("kappa_u^2 must be >= 0");
  if (!(m_u >= 0.0)) throw InvalidArgument("m_u must be >= 0");
  if (kappa_u2 == 0.0 && m_u == 0.0) throw InvalidArgument("kappa_u^2 and m_u cannot both vanish");
  if (N < 1) throw InvalidArgument("N must be >= 1");
  if (n_f < 1) throw InvalidArgument("N_f must be >= 1");
  if (group == GroupKind::SU && N < 2) throw InvalidArgument("SU(N) requires N >= 2");
}

double ModelParams::gauge_coefficient() const { return std::pow(a, d - 4) / g2; }

ScalingFactors scaling_factors(const ModelParams& p) {
  ScalingFactors s;
  const double ma2 = p.m_u * p.m_u * p.a * p.a;
  s.s_b = std::sqrt(std::pow(p.a, p.d - 2) * (ma2 + 2.0 * p.d * p.kappa_u2));
  s.s_y = std::pow(p.a, 0.5 * (p.d - 4)) / std::sqrt(p.g2);
  // u/(a^2 + 2du) with u = kappa_u^2/m_u^2, written so that m_u = 0 is exact
  s.kappa2 = p.kappa_u2 / (2.0 * p.d * p.kappa_u2 + ma2);
  return s;
}

GaugeConfig GaugeConfig::identity(std::shared_ptr<const Lattice> lattice, int n) {
  GaugeConfig cfg;
  cfg.n = n;
  cfg.links.assign(lattice->num_bonds(), CMatrix::Identity(n, n));
  cfg.lattice = std::move(lattice);
  return cfg;
}

GaugeConfig GaugeConfig::random(std::shared_ptr<const Lattice> lattice, GroupKind kind, int n, SampleStream& rng,
                                const GaugeFixing* fixing) {
  GaugeConfig cfg = identity(lattice, n);
  for (int b = 0; b < lattice->num_bonds(); ++b) {
    if (fixing && fixing->in_tree[b]) continue;
    cfg.links[b] = haar_sample(kind, n, rng).matrix();
  }
  return cfg;
}

CMatrix plaquette_holonomy(const Plaquette& p, const GaugeConfig& cfg) {
  const auto& g = cfg.links;
  return g[p.bonds[0]] * g[p.bonds[1]] * g[p.bonds[2]].adjoint() * g[p.bonds[3]].adjoint();
}

double wilson_plaquette_action(const Plaquette& p, const GaugeConfig& cfg) {
  const CMatrix gp = plaquette_holonomy(p, cfg);
  return (CMatrix::Identity(cfg.n, cfg.n) - gp).squaredNorm();
}

double wilson_total_action(const GaugeConfig& cfg, const ModelParams& params) {
  double sum = 0.0;
  for (const auto& p : cfg.lattice->plaquettes()) sum += wilson_plaquette_action(p, cfg);
  return params.gauge_coefficient() * sum;
}

double single_bond_action(const CMatrix& u) {
  return (CMatrix::Identity(u.rows(), u.cols()) - u).squaredNorm();
}

double single_bond_action_eigen(std::span<const double> lambda) {
  double s = 0.0;
  for (double l : lambda) {
    const double h = std::sin(0.5 * l);
    s += 4.0 * h * h;  // 2(1 - cos l)
  }
  return s;
}

double bose_action(const ScalarFieldConfig& phi, const GaugeConfig& cfg, const ModelParams& params, bool scaled) {
  if (!phi.lattice || !cfg.lattice || phi.lattice.get() != cfg.lattice.get())
    throw InvalidArgument("bose_action: field and gauge configuration live on different lattices");
  const int n = cfg.n;
  if (phi.components % n != 0) throw InvalidArgument("bose_action: component count is not a multiple of N");
  const int flavors = phi.components / n;
  const auto [cs, cb] = bose_coefficients(params, scaled);
  const bool real = phi.kind == FieldKind::Real;

  auto field = [&](int site) -> Eigen::VectorXcd {
    Eigen::VectorXcd v = phi.at(site);
    if (real) v = v.real().cast<Complex>();
    return v;
  };

  double site_term = 0.0;
  for (int s = 0; s < phi.lattice->num_sites(); ++s) site_term += field(s).squaredNorm();

  double bond_term = 0.0;
  for (int b = 0; b < cfg.lattice->num_bonds(); ++b) {
    const Bond& bond = cfg.lattice->bond(b);
    const Eigen::VectorXcd x = field(bond.site), y = field(bond.target);
    const CMatrix g = real ? CMatrix(cfg.links[b].real().cast<Complex>()) : cfg.links[b];
    for (int f = 0; f < flavors; ++f) {
      const Complex v = x.segment(f * n, n).dot(g * y.segment(f * n, n));  // x^+ g y
      bond_term += v.real();
    }
  }
  return 0.5 * cs * site_term - cb * bond_term;
}

GluonScaled gluon_scaling(const LieAlgebraElement& x, double a, double g, int d) {
  GluonScaled out;
  out.A = x.coeffs / (a * g);
  out.y = std::pow(a, 0.5 * (d - 2)) * out.A;
  return out;
}

LieAlgebraElement gluon_unscale(const RVector& y, GroupKind kind, int n, double a, double g, int d) {
  LieAlgebraElement x;
  x.kind = kind;
  x.n = n;
  x.coeffs = y * (g / std::pow(a, 0.5 * (d - 4)));
  return x;
}

GaugeConfig gauge_transform(const GaugeConfig& cfg, const std::vector<CMatrix>& r) {
  if (static_cast<int>(r.size()) != cfg.lattice->num_sites()) throw InvalidArgument("gauge_transform: need one matrix per site");
  GaugeConfig out = cfg;
  for (int b = 0; b < cfg.lattice->num_bonds(); ++b) {
    const Bond& bond = cfg.lattice->bond(b);
    out.links[b] = r[bond.site] * cfg.links[b] * r[bond.target].adjoint();
  }
  return out;
}

ScalarFieldConfig gauge_transform(const ScalarFieldConfig& phi, const std::vector<CMatrix>& r, int n) {
  ScalarFieldConfig out = phi;
  const int flavors = phi.components / n;
  for (int s = 0; s < phi.lattice->num_sites(); ++s)
    for (int f = 0; f < flavors; ++f) {
      const int off = s * phi.components + f * n;
      out.values.segment(off, n) = r[s] * phi.values.segment(off, n);
    }
  return out;
}

QuadraticBound quadratic_plaquette_bound(const Plaquette& p, const GaugeConfig& cfg, const GaugeFixing& fixing) {
  QuadraticBound qb;
  qb.action = wilson_plaquette_action(p, cfg);
  double sum = 0.0;
  for (int b : p.bonds) {
    if (fixing.in_tree[b]) continue;
    ++qb.retained;
    for (double l : angular_eigenvalues(cfg.links[b])) sum += l * l;
  }
  qb.bound = qb.retained * cfg.n * sum;
  return qb;
}

ElementaryReport elementary_bounds_check(std::uint64_t n_samples, std::uint64_t seed, int workers) {
  auto report = chunked_reduce<ElementaryReport>(n_samples, workers, [seed](std::uint64_t begin, std::uint64_t end) {
    ElementaryReport r;
    for (std::uint64_t i = begin; i < end; ++i) {
      SampleStream rng(seed, i);
      const double u = 40.0 * rng.uniform() - 20.0;
      const double h = std::sin(0.5 * u);
      const double one_minus_cos = 2.0 * h * h;
      if (one_minus_cos > 0.5 * u * u * (1.0 + 1e-15)) ++r.upper_violations;
      const double v = kPi * (2.0 * rng.uniform() - 1.0);
      const double hv = std::sin(0.5 * v);
      if (2.0 * hv * hv < (2.0 * v * v / (kPi * kPi)) * (1.0 - 1e-15)) ++r.lower_violations;
      ++r.samples;
    }
    return r;
  });
  // deterministic grid including the equality points u = 0 and u = +-pi
  const int grid = 10001;
  for (int i = 0; i < grid; ++i) {
    const double v = -kPi + 2.0 * kPi * i / (grid - 1);
    const double hv = std::sin(0.5 * v);
    const double omc = 2.0 * hv * hv;
    if (omc > 0.5 * v * v * (1.0 + 1e-15)) ++report.upper_violations;
    if (omc < (2.0 * v * v / (kPi * kPi)) * (1.0 - 1e-15)) ++report.lower_violations;
    ++report.samples;
  }
  return report;
}

}  // namespace latstab
