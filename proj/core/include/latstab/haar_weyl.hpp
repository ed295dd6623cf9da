#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "latstab/group.hpp"
#include "latstab/rng.hpp"

namespace latstab {

// Haar-distributed element of U(N) or SU(N).
UnitaryMatrix haar_sample(GroupKind kind, int n, SampleStream& rng);

// prod_{j<k} 2[1 - cos(lambda_j - lambda_k)]
double cue_density(std::span<const double> lambda);
// |det V|^2 with V_{jk} = e^{i (k-1) lambda_j}
double cue_density_vandermonde(std::span<const double> lambda);
// prod_{j<k} (y_j - y_k)^2
double gue_density(std::span<const double> y);

// N! (2 pi)^N
double cue_normalization(int n);
double log_cue_normalization(int n);

using ClassFunction = std::function<double(std::span<const double>)>;

struct WeylQuadrature {
  int nodes_per_axis = 0;  // 0 selects 256 (N <= 2) or 128 (N = 3)
  double half_width = 0.0; // 0 or >= pi integrates the full torus
  double rel_tol = 1e-7;   // against the half-resolution rule, relative to the L1 norm
};

// Haar average of a class function: (1/(N!(2pi)^N)) int f rho for U(N); for SU(N)
// lambda_N = -(lambda_1 + ... + lambda_{N-1}) and the prefactor is 1/(N!(2pi)^{N-1}).
// A narrowed window assumes the integrand is negligible outside it.
double weyl_integrate(const ClassFunction& f, int n, GroupKind kind, const WeylQuadrature& quad = {});

// I(u) = int_{(-u,u]^N} e^{-|y|^2} rho_hat(y) dy; u = +inf uses Gauss-Hermite, exact.
double gue_integral(double u, int n);
// Closed form (2 pi)^{N/2} 2^{-N^2/2} prod_{j=1}^N j!
double gue_normalization_closed_form(int n);

struct EnsembleConstants {
  int n = 1;
  double n_c = 0.0;
  double n_g = 0.0;
  double ratio = 0.0;
  double log_ratio = 0.0;
};
EnsembleConstants ensemble_constants(int n);

}  // namespace latstab
