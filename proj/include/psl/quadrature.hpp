#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace psl {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite 8-point Gauss-Legendre rule on [a, b] with `panels` equal panels.
QuadRule composite_gauss_legendre(double a, double b, std::size_t panels);

/// Adaptive Gauss-Kronrod (61-point) integration of a smooth integrand.
/// Throws ConvergenceError when the error estimate stays above tol * |I|.
double integrate_adaptive(const std::function<double(double)>& fn, double a, double b,
                          double tol = 1e-13);

}  // namespace psl
