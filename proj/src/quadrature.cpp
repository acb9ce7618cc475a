#include "psl/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "psl/error.hpp"

namespace psl {

QuadRule composite_gauss_legendre(double a, double b, std::size_t panels) {
  using rule = boost::math::quadrature::gauss<double, 8>;
  if (panels == 0) throw InvalidArgument("composite rule needs at least one panel");
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  QuadRule out;
  out.nodes.reserve(8 * panels);
  out.weights.reserve(8 * panels);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    // Boost stores the four nonnegative abscissae of the symmetric rule.
    for (std::size_t i = x.size(); i-- > 0;) {
      out.nodes.push_back(mid - 0.5 * h * x[i]);
      out.weights.push_back(0.5 * h * w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.nodes.push_back(mid + 0.5 * h * x[i]);
      out.weights.push_back(0.5 * h * w[i]);
    }
  }
  return out;
}

double integrate_adaptive(const std::function<double(double)>& fn, double a, double b,
                          double tol) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err = 0.0;
  const double value = rule::integrate(fn, a, b, 30, tol, &err);
  if (!std::isfinite(value) || err > 100.0 * tol * std::max(1.0, std::abs(value)))
    throw ConvergenceError("adaptive quadrature did not reach the requested tolerance");
  return value;
}

}  // namespace psl
