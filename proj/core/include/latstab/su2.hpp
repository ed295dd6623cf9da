#pragma once

#include <array>

#include "latstab/group.hpp"

namespace latstab::su2 {

using Vec3 = std::array<double, 3>;

// (w0, w) on the unit 3-sphere.
struct GroupPoint {
  double w0 = 1.0;
  Vec3 w{0.0, 0.0, 0.0};

  double norm() const;
  // [[w0 + i w3, w2 + i w1], [-w2 + i w1, w0 - i w3]] = w0 I + i w.sigma
  CMatrix matrix() const;
  static GroupPoint from_matrix(const CMatrix& m);
};

double norm(const Vec3& v);

GroupPoint su2_exp(const Vec3& a);
// Inverse of su2_exp on |A| < pi; throws NumericError at minus the identity.
Vec3 su2_log(const GroupPoint& p);

double su2_haar_density(const Vec3& a);
double su2_haar_density_radial(double r);

// Single-bond integral via the 3-d gluon integral in spherical coordinates.
double su2_z_gluon(double a, double g2, int d);
// The same integral through the Weyl angular formula.
double su2_z_weyl(double a, double g2, int d);

// E(gamma) = int_0^gamma e^{-r^2} r^2 dr.
double capital_e(double gamma);
inline constexpr double kCapitalEInf = 0.44311346272637900682;  // sqrt(pi)/4

struct BoundsCheck {
  double a = 1.0, g2 = 1.0;
  int d = 4, L = 2;
  double z = 0.0;              // Wilson single-bond integral
  double scaled_z = 0.0;       // (g^2/a^{d-4})^{-3/2} z
  double z_tilde = 0.0;        // small-field lower-bound integral
  double scaled_z_tilde = 0.0;
  double upper_constant = 0.0; // (pi^2/4) E(inf)
  double lower_constant = 0.0; // value of scaled z_tilde at a = 1, g^2 = g0^2
  bool upper_ok = false;
  bool lower_ok = false;
  bool pass() const { return upper_ok && lower_ok; }
};

// Checks the SU(2) upper and lower single-bond bounds; g0_sq fixes the lower constant.
BoundsCheck su2_bounds_check(double a, double g2, int d, int L, double g0_sq = 4.0);

// Lower-bound integral z~ = (8/pi^3) k^{-3/2} E(sqrt(k) pi/2), k = 2 c (d-1) C^2, C^2 = 8.
double su2_z_tilde(double a, double g2, int d);

}  // namespace latstab::su2
