#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "latstab/actions.hpp"
#include "latstab/estimate.hpp"

namespace latstab {

// Gaussian form of the Bose integral at fixed gauge field. Real fields give a
// symmetric matrix (imaginary part zero), complex fields a Hermitian one.
struct QuadraticForm {
  FieldKind kind = FieldKind::Complex;
  Eigen::MatrixXcd matrix;
  // Gershgorin lower bound on the spectrum
  double gershgorin_min = 0.0;

  int size() const { return static_cast<int>(matrix.rows()); }
};

QuadraticForm assemble_quadratic_form(const GaugeConfig& cfg, const ModelParams& params, bool scaled);

struct LogDet {
  double log_det = 0.0;
  double min_pivot = 0.0;
};
// Cholesky log-determinant; throws NumericError naming the smallest pivot when not positive definite.
LogDet log_determinant(const QuadraticForm& q);

// det^{-1/2} (real) or det^{-1} (complex), normalized so that kappa = 0 gives 1.
Estimate z_bose_exact(const GaugeConfig& cfg, const ModelParams& params, bool scaled);

struct ScalingIdentityReport {
  double log_z_scaled = 0.0;
  double log_z_unscaled = 0.0;
  double log_factor = 0.0;  // n_real * log s_B
  double rel_error = 0.0;
  bool pass(double tol = 1e-8) const { return rel_error <= tol; }
};
ScalingIdentityReport z_bose_scaling_identity(const GaugeConfig& cfg, const ModelParams& params);

// Brute-force Gaussian oracle: tensor Gauss-Legendre over |phi| <= cutoff.
// Only for a handful of real dimensions.
double z_bose_brute_force(const QuadraticForm& q, int nodes_per_axis = 64, double cutoff = 8.0);

// Importance-sampled Gaussian integral, psi ~ N(0, I/lambda_min); the weight is bounded.
Estimate z_bose_mc(const QuadraticForm& q, std::uint64_t n_samples, std::uint64_t seed, int workers = 1);

// Chain of L sites with kernel e^{-x^2/4} e^{d kappa^2 x.g y} e^{-y^2/4} between
// neighbours; returns log of the normalized chain integral.
double chain_partition(int L, int N, int d, double kappa2, const std::vector<CMatrix>& gauges,
                       FieldKind kind = FieldKind::Real);
// Same integral for N = 1, g = 1 through a discretized transfer matrix.
double chain_partition_transfer(int L, int d, double kappa2, int grid = 400, double cutoff = 10.0);

struct HolmgrenReport {
  int N = 1;
  double largest_singular_value = 0.0;
  double bound = 0.0;           // (4 pi)^{N/2}
  double complex_row_integral = 0.0;
  double embedding_residual = 0.0;  // max over samples of |L^T L - 4 I|
  bool pass(double tol = 1e-3) const {
    return largest_singular_value <= bound * (1.0 + tol) && embedding_residual < 1e-10;
  }
};
// Discretizes T_b(x,y) with d kappa^2 = dkappa2 on [-cutoff, cutoff] (N = 1),
// and checks the complex embedding identity on random unitary g.
HolmgrenReport holmgren_bound_check(int N, double dkappa2 = 0.5, int grid = 512, double cutoff = 8.0,
                                    std::uint64_t seed = 1);

struct McOptions {
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  bool gauge_fixed = false;
};
// Z^w = E_Haar[e^{-S^w}] over all bonds or over retained bonds only.
Estimate z_wilson_mc(const Lattice& lattice, const ModelParams& params, const McOptions& opts);

// Periodic trapezoid tensor rule over U(1) bond angles (all bonds or retained only).
Estimate z_wilson_quadrature_u1(const Lattice& lattice, const ModelParams& params, bool gauge_fixed,
                                int nodes_per_axis = 32);

enum class BondVariant { Z, Z1, ZCheck };
const char* to_string(BondVariant v);

// z, z1 or z-check for a single bond at the coupling of `params` (Weyl quadrature).
double z_single_bond(const ModelParams& params, BondVariant variant);

struct ScaledPartition {
  double log_z_y = 0.0;
  double log_z_b = 0.0;
  double log_z = 0.0;
};
struct UnscaledInputs {
  std::optional<double> log_z_w;   // Z^w_Y
  std::optional<double> log_z_b_u; // Z^u_B(g) at some gauge config
  std::optional<double> log_z_u;   // full unscaled Z^u
};
ScaledPartition assemble_scaled(const ModelParams& params, const Lattice& lattice, const UnscaledInputs& in);

// Full Bose-gauge model for d = 2, U(1), L <= 3 by quadrature over plaquette angles
// in the enhanced temporal gauge.
struct FullModelResult {
  double log_z_u = 0.0;          // unscaled Z^u
  double log_z_w = 0.0;          // Z^w_Y over the same grid
  double min_log_z_b = 0.0;      // scaled Z_B over grid nodes and extra configs
  double max_log_z_b = 0.0;
  std::uint64_t evaluations = 0;
};
FullModelResult z_full_quadrature_d2(const Lattice& lattice, const ModelParams& params, int nodes_per_axis = 16);

// Z^u = s_B^{-n} E_Haar[Z_B(g) e^{-S^w(g)}], gauge fixed, by Monte Carlo.
struct FullModelMc {
  Estimate z_u;
  Estimate z_w;  // Z^w_Y from the same samples
  double min_log_z_b = 0.0;
  double max_log_z_b = 0.0;
};
FullModelMc z_full_mc(const Lattice& lattice, const ModelParams& params, const McOptions& opts);

}  // namespace latstab
