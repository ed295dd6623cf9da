#include "latstab/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "latstab/error.hpp"

namespace latstab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidArgument(std::string(what) + ": matrix must be square and non-empty");
}

// (phi -/+ alpha) for the 2x2 case: U = e^{i phi} W with W in SU(2).
std::vector<double> angles_2x2(const CMatrix& u) {
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const double phi = std::arg(det) / 2.0;
  const Complex rot = std::polar(1.0, -phi);
  const Complex w00 = u(0, 0) * rot, w01 = u(0, 1) * rot, w10 = u(1, 0) * rot, w11 = u(1, 1) * rot;
  const double w0 = 0.5 * (w00 + w11).real();
  const double w3 = 0.5 * (w00 - w11).imag();
  const double w1 = 0.5 * (w01 + w10).imag();
  const double w2 = 0.5 * (w01 - w10).real();
  const double alpha = std::atan2(std::sqrt(w1 * w1 + w2 * w2 + w3 * w3), w0);
  std::vector<double> out{wrap_angle(phi + alpha), wrap_angle(phi - alpha)};
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

const char* to_string(GroupKind kind) { return kind == GroupKind::U ? "U" : "SU"; }

GroupKind parse_group_kind(const std::string& text) {
  if (text == "U" || text == "u") return GroupKind::U;
  if (text == "SU" || text == "su") return GroupKind::SU;
  throw InvalidArgument("group must be U or SU, got '" + text + "'");
}

int lie_dimension(GroupKind kind, int n) { return kind == GroupKind::U ? n * n : n * n - 1; }

double wrap_angle(double x) {
  double y = std::remainder(x, 2.0 * kPi);  // [-pi, pi]
  if (y <= -kPi) y += 2.0 * kPi;
  return y;
}

UnitaryMatrix::UnitaryMatrix(CMatrix m, GroupKind kind, double tol) : m_(std::move(m)) {
  require_square(m_, "UnitaryMatrix");
  if (!is_unitary(m_, tol)) throw NumericError("matrix is not unitary within tolerance");
  if (kind == GroupKind::SU && !is_special_unitary(m_, tol)) throw NumericError("matrix does not have unit determinant");
}

UnitaryMatrix UnitaryMatrix::unchecked(CMatrix m) {
  UnitaryMatrix u;
  u.m_ = std::move(m);
  return u;
}

UnitaryMatrix UnitaryMatrix::identity(int n) { return unchecked(CMatrix::Identity(n, n)); }

bool is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).norm() <= tol;
}

bool is_special_unitary(const CMatrix& m, double tol) {
  return is_unitary(m, tol) && std::abs(m.determinant() - Complex(1.0, 0.0)) <= tol;
}

UnitaryMatrix repair_unitarity(const CMatrix& m) {
  require_square(m, "repair_unitarity");
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return UnitaryMatrix::unchecked(svd.matrixU() * svd.matrixV().adjoint());
}

double hs_norm(const CMatrix& m) {
  require_square(m, "hs_norm");
  return m.norm();
}

double op_norm(const CMatrix& m) {
  require_square(m, "op_norm");
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

LieBasis make_basis(GroupKind kind, int n) {
  if (n < 1) throw InvalidArgument("make_basis: N must be >= 1");
  LieBasis basis;
  basis.kind = kind;
  basis.n = n;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      CMatrix sym = CMatrix::Zero(n, n);
      sym(j, k) = s;
      sym(k, j) = s;
      basis.generators.push_back(sym);
      CMatrix anti = CMatrix::Zero(n, n);
      anti(j, k) = Complex(0.0, -s);
      anti(k, j) = Complex(0.0, s);
      basis.generators.push_back(anti);
    }
  }
  // diag(1,..,1,-l,0,..)/sqrt(l(l+1)) for l = 1..N-1
  for (int l = 1; l < n; ++l) {
    CMatrix diag = CMatrix::Zero(n, n);
    const double c = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int i = 0; i < l; ++i) diag(i, i) = c;
    diag(l, l) = -static_cast<double>(l) * c;
    basis.generators.push_back(diag);
  }
  if (kind == GroupKind::U) basis.generators.push_back(CMatrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
  return basis;
}

const LieBasis& cached_basis(GroupKind kind, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<LieBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{static_cast<int>(kind), n}];
  if (!slot) slot = std::make_unique<LieBasis>(make_basis(kind, n));
  return *slot;
}

CMatrix LieAlgebraElement::matrix() const {
  const LieBasis& basis = cached_basis(kind, n);
  if (coeffs.size() != basis.dimension()) throw InvalidArgument("LieAlgebraElement: coefficient count does not match d(N)");
  CMatrix x = CMatrix::Zero(n, n);
  for (int a = 0; a < basis.dimension(); ++a) x += coeffs(a) * basis.generators[a];
  return x;
}

LieAlgebraElement LieAlgebraElement::from_matrix(const CMatrix& x, GroupKind kind) {
  require_square(x, "from_matrix");
  const int n = static_cast<int>(x.rows());
  const LieBasis& basis = cached_basis(kind, n);
  LieAlgebraElement e;
  e.kind = kind;
  e.n = n;
  e.coeffs.resize(basis.dimension());
  for (int a = 0; a < basis.dimension(); ++a) e.coeffs(a) = (basis.generators[a] * x).trace().real();
  return e;
}

UnitaryMatrix exp_hermitian(const CMatrix& x) {
  require_square(x, "exp_hermitian");
  const int n = static_cast<int>(x.rows());
  if (n == 1) return UnitaryMatrix::unchecked(CMatrix::Constant(1, 1, std::polar(1.0, x(0, 0).real())));
  const CMatrix h = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericError("exp_map: eigendecomposition failed");
  Eigen::VectorXcd phases(n);
  for (int i = 0; i < n; ++i) phases(i) = std::polar(1.0, es.eigenvalues()(i));
  return UnitaryMatrix::unchecked(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
}

UnitaryMatrix exp_map(const LieAlgebraElement& x) { return exp_hermitian(x.matrix()); }

std::vector<double> angular_eigenvalues(const CMatrix& u) {
  require_square(u, "angular_eigenvalues");
  const int n = static_cast<int>(u.rows());
  if (n == 1) return {wrap_angle(std::arg(u(0, 0)))};
  if (n == 2) return angles_2x2(u);
  Eigen::ComplexSchur<CMatrix> schur(u, false);
  if (schur.info() != Eigen::Success) throw NumericError("angular_eigenvalues: Schur decomposition failed");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = wrap_angle(std::arg(schur.matrixT()(i, i)));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> angular_eigenvalues(const UnitaryMatrix& u) { return angular_eigenvalues(u.matrix()); }

CMatrix log_matrix(const UnitaryMatrix& u) {
  const CMatrix& m = u.matrix();
  require_square(m, "log_map_spectral");
  if (!is_unitary(m, 1e-8)) throw NumericError("log_map_spectral: input is not unitary (eigendecomposition would be unreliable)");
  const int n = u.n();
  if (n == 1) return CMatrix::Constant(1, 1, wrap_angle(std::arg(m(0, 0))));
  // Schur vectors of a normal matrix are eigenvectors.
  Eigen::ComplexSchur<CMatrix> schur(m, true);
  if (schur.info() != Eigen::Success) throw NumericError("log_map_spectral: Schur decomposition failed");
  Eigen::VectorXcd lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = wrap_angle(std::arg(schur.matrixT()(i, i)));
  const CMatrix& v = schur.matrixU();
  CMatrix x = v * lambda.asDiagonal() * v.adjoint();
  return 0.5 * (x + x.adjoint());
}

LieAlgebraElement log_map_spectral(const UnitaryMatrix& u) {
  return LieAlgebraElement::from_matrix(log_matrix(u), GroupKind::U);
}

}  // namespace latstab
