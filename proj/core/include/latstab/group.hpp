#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace latstab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

enum class GroupKind { U, SU };

const char* to_string(GroupKind kind);
GroupKind parse_group_kind(const std::string& text);

inline constexpr double kUnitarityTol = 1e-10;

// Dimension d(N) of the Lie algebra: N^2 for U(N), N^2 - 1 for SU(N).
int lie_dimension(GroupKind kind, int n);

// An N x N unitary matrix. The checked constructor enforces the invariants;
// `unchecked` is for hot loops that build products of known-unitary factors.
class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;
  explicit UnitaryMatrix(CMatrix m, GroupKind kind = GroupKind::U, double tol = kUnitarityTol);

  static UnitaryMatrix unchecked(CMatrix m);
  static UnitaryMatrix identity(int n);

  int n() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  UnitaryMatrix adjoint() const { return unchecked(m_.adjoint()); }
  UnitaryMatrix operator*(const UnitaryMatrix& other) const { return unchecked(m_ * other.m_); }

 private:
  CMatrix m_;
};

bool is_unitary(const CMatrix& m, double tol = kUnitarityTol);
bool is_special_unitary(const CMatrix& m, double tol = kUnitarityTol);

// Nearest unitary matrix (polar factor). Explicit repair, never applied implicitly.
UnitaryMatrix repair_unitarity(const CMatrix& m);

double hs_norm(const CMatrix& m);
double op_norm(const CMatrix& m);

struct LieBasis {
  GroupKind kind = GroupKind::U;
  int n = 1;
  std::vector<CMatrix> generators;

  int dimension() const { return static_cast<int>(generators.size()); }
};

// Generalized Gell-Mann matrices scaled so that Tr(theta_a theta_b) = delta_ab;
// U(N) appends I/sqrt(N).
LieBasis make_basis(GroupKind kind, int n);

// Shared immutable basis, built once per (kind, n).
const LieBasis& cached_basis(GroupKind kind, int n);

struct LieAlgebraElement {
  GroupKind kind = GroupKind::U;
  int n = 1;
  RVector coeffs;

  CMatrix matrix() const;
  double norm_squared() const { return coeffs.squaredNorm(); }

  static LieAlgebraElement from_matrix(const CMatrix& x, GroupKind kind);
};

UnitaryMatrix exp_map(const LieAlgebraElement& x);
// e^{iX} for a self-adjoint X given as a matrix.
UnitaryMatrix exp_hermitian(const CMatrix& x);

// Angles in (-pi, pi], -pi mapped to +pi, sorted descending.
std::vector<double> angular_eigenvalues(const UnitaryMatrix& u);
std::vector<double> angular_eigenvalues(const CMatrix& u);

// X = V diag(lambda) V^{-1} with lambda the angular eigenvalues; X is
// expressed in the U(N) basis since Tr X need not vanish even for SU(N).
LieAlgebraElement log_map_spectral(const UnitaryMatrix& u);
CMatrix log_matrix(const UnitaryMatrix& u);

// Maps an angle into (-pi, pi].
double wrap_angle(double x);

}  // namespace latstab
