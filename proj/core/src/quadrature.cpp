#include "latstab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <queue>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "latstab/error.hpp"

namespace latstab {

namespace {
constexpr int kPanelOrder = 16;
}

Rule1D composite_gauss_legendre(double lo, double hi, int total_nodes) {
  if (!(hi > lo)) throw InvalidArgument("composite_gauss_legendre: empty interval");
  const int panels = std::max(1, (total_nodes + kPanelOrder - 1) / kPanelOrder);
  using GL = boost::math::quadrature::gauss<double, kPanelOrder>;
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  Rule1D rule;
  rule.nodes.reserve(panels * kPanelOrder);
  rule.weights.reserve(panels * kPanelOrder);
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h, half = 0.5 * h;
    for (std::size_t i = x.size(); i-- > 0;) {
      rule.nodes.push_back(mid - half * x[i]);
      rule.weights.push_back(half * w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      rule.nodes.push_back(mid + half * x[i]);
      rule.weights.push_back(half * w[i]);
    }
  }
  return rule;
}

Rule1D gauss_hermite(int n) {
  if (n < 1) throw InvalidArgument("gauss_hermite: n must be >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Rule1D rule;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(es.eigenvalues()(i));
    const double v0 = es.eigenvectors()(0, i);
    rule.weights.push_back(std::sqrt(std::numbers::pi) * v0 * v0);
  }
  return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                          double* achieved) {
  // Global bisection on the worst panel. Each panel is mapped to [-1, 1] before
  // the fixed GK61 rule so that Boost's error and L1 refer to the same variable.
  struct Panel {
    double lo, hi, value, error, l1;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto panel = [&](double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double error = 0.0, l1 = 0.0;
    const double v = GK::integrate([&](double t) { return f(mid + half * t); }, -1.0, 1.0, 0, 0.0, &error, &l1);
    return Panel{a, b, half * v, half * error, half * l1};
  };
  constexpr int kMaxPanels = 4096;
  std::priority_queue<Panel> queue;
  queue.push(panel(lo, hi));
  double value = queue.top().value, error = queue.top().error, l1 = queue.top().l1;
  while (error > rel_tol * l1 && static_cast<int>(queue.size()) < kMaxPanels) {
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = panel(worst.lo, mid), right = panel(mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);
  }
  // re-sum to drop the cancellation noise of the running updates
  value = error = l1 = 0.0;
  for (; !queue.empty(); queue.pop()) {
    value += queue.top().value;
    error += queue.top().error;
    l1 += queue.top().l1;
  }
  const double rel = l1 > 0.0 ? error / l1 : error;
  if (achieved) *achieved = rel;
  if (!std::isfinite(value) || rel > rel_tol) throw QuadratureError("adaptive quadrature did not converge", rel);
  return value;
}

double tensor_sum(const Rule1D& rule, int dim, const std::function<double(std::span<const double>)>& f,
                  double* abs_sum) {
  if (dim < 1) throw InvalidArgument("tensor_sum: dim must be >= 1");
  const std::size_t m = rule.size();
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> point(dim);
  double total = 0.0, total_abs = 0.0;
  for (;;) {
    double w = 1.0;
    for (int k = 0; k < dim; ++k) {
      point[k] = rule.nodes[idx[k]];
      w *= rule.weights[idx[k]];
    }
    const double v = w * f(point);
    total += v;
    total_abs += std::abs(v);
    int k = dim - 1;
    while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
    if (k < 0) break;
  }
  if (abs_sum) *abs_sum = total_abs;
  return total;
}

}  // namespace latstab
