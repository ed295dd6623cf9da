#pragma once

#include <functional>
#include <span>
#include <vector>

namespace latstab {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// Composite Gauss-Legendre on [lo, hi]: `panels` panels of 16 nodes each.
Rule1D composite_gauss_legendre(double lo, double hi, int total_nodes);

// Gauss-Hermite nodes/weights for the weight e^{-x^2} (Golub-Welsch).
Rule1D gauss_hermite(int n);

// Adaptive Gauss-Kronrod on [lo, hi]; throws QuadratureError if the error
// estimate stays above rel_tol * L1.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol = 1e-10, double* achieved = nullptr);

// Tensor-product sum of f over rule^dim; abs_sum receives the same sum of |f|.
double tensor_sum(const Rule1D& rule, int dim, const std::function<double(std::span<const double>)>& f,
                  double* abs_sum = nullptr);

}  // namespace latstab
