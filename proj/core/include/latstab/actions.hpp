#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "latstab/group.hpp"
#include "latstab/lattice.hpp"
#include "latstab/rng.hpp"

namespace latstab {

enum class FieldKind { Real, Complex };
const char* to_string(FieldKind kind);
FieldKind parse_field_kind(const std::string& text);

struct ModelParams {
  int d = 2;
  int L = 2;
  double a = 1.0;
  double g2 = 1.0;
  double g0_sq = 4.0;
  double kappa_u2 = 1.0;
  double m_u = 0.0;
  int N = 1;
  int n_f = 1;
  GroupKind group = GroupKind::U;
  FieldKind field = FieldKind::Complex;

  // Throws InvalidArgument naming the violated constraint.
  void validate() const;
  // a^{d-4} / g^2
  double gauge_coefficient() const;
  int field_components() const { return N * n_f; }
};

struct ScalingFactors {
  double s_b = 1.0;
  double s_y = 1.0;
  double kappa2 = 0.0;
};
ScalingFactors scaling_factors(const ModelParams& p);

// Bond variables on every bond of a lattice.
struct GaugeConfig {
  std::shared_ptr<const Lattice> lattice;
  int n = 1;
  std::vector<CMatrix> links;

  static GaugeConfig identity(std::shared_ptr<const Lattice> lattice, int n);
  // Haar on every bond, or only on retained bonds (tree bonds left at 1).
  static GaugeConfig random(std::shared_ptr<const Lattice> lattice, GroupKind kind, int n, SampleStream& rng,
                            const GaugeFixing* fixing = nullptr);
};

struct ScalarFieldConfig {
  std::shared_ptr<const Lattice> lattice;
  FieldKind kind = FieldKind::Complex;
  int components = 1;
  Eigen::VectorXcd values;  // site-major, `components` entries per site

  Eigen::Ref<const Eigen::VectorXcd> at(int site) const { return values.segment(site * components, components); }
};

CMatrix plaquette_holonomy(const Plaquette& p, const GaugeConfig& cfg);
// ||1 - g_p||_HS^2
double wilson_plaquette_action(const Plaquette& p, const GaugeConfig& cfg);
// (a^{d-4}/g^2) sum_p A_p
double wilson_total_action(const GaugeConfig& cfg, const ModelParams& params);

// ||U - 1||^2_HS and its eigenvalue form 2 sum (1 - cos lambda_j)
double single_bond_action(const CMatrix& u);
double single_bond_action_eigen(std::span<const double> lambda);

// Field action; the real branch uses the merged hopping convention, acting on
// the real part of the field with Re(g_b).
double bose_action(const ScalarFieldConfig& phi, const GaugeConfig& cfg, const ModelParams& params, bool scaled);

struct GluonScaled {
  RVector A;
  RVector y;
};
GluonScaled gluon_scaling(const LieAlgebraElement& x, double a, double g, int d);
LieAlgebraElement gluon_unscale(const RVector& y, GroupKind kind, int n, double a, double g, int d);

// Local gauge transformation g_b -> r_x g_b r_{x+e_mu}^{-1}, phi(x) -> r_x phi(x).
GaugeConfig gauge_transform(const GaugeConfig& cfg, const std::vector<CMatrix>& r);
ScalarFieldConfig gauge_transform(const ScalarFieldConfig& phi, const std::vector<CMatrix>& r, int n);

struct QuadraticBound {
  double action = 0.0;
  double bound = 0.0;
  int retained = 0;
  bool holds() const { return action <= bound + 1e-12; }
};
// A_p against k N sum_{retained} |x_j|^2, x_j = spectral log of each retained bond.
QuadraticBound quadratic_plaquette_bound(const Plaquette& p, const GaugeConfig& cfg, const GaugeFixing& fixing);

struct ElementaryReport {
  std::uint64_t samples = 0;
  std::uint64_t upper_violations = 0;  // 1 - cos u <= u^2/2
  std::uint64_t lower_violations = 0;  // 1 - cos u >= 2u^2/pi^2 on |u| <= pi
  void merge(const ElementaryReport& o) {
    samples += o.samples;
    upper_violations += o.upper_violations;
    lower_violations += o.lower_violations;
  }
  bool pass() const { return upper_violations == 0 && lower_violations == 0; }
};
ElementaryReport elementary_bounds_check(std::uint64_t n_samples, std::uint64_t seed, int workers = 1);

}  // namespace latstab
