#pragma once

#include <cstddef>
#include <optional>

#include "psl/phase_grid.hpp"
#include "psl/signal.hpp"

namespace psl {

struct TransformOptions {
  /// Zero-padding factor of the lag FFT (refines the xi axis).
  std::size_t xi_oversample = 1;
  std::optional<Window> window;
};

/// Quadrature control for the tau-average of the Born-Jordan distribution.
struct QuadSpec {
  std::size_t nodes = 32;  ///< initial node count, a multiple of 8
  double tol = 1e-6;       ///< relative change under node doubling
  std::size_t max_nodes = 1024;
};

/// W(f, g)(x, xi) = int e^{-2 pi i xi y} f(x + y/2) conj(g(x - y/2)) dy.
PhaseSpaceField cross_wigner(const Signal& f, const Signal& g, const TransformOptions& opt = {});
PhaseSpaceField wigner(const Signal& f, const TransformOptions& opt = {});

/// W_tau(f, g)(x, xi) = int e^{-2 pi i xi y} f(x + tau y) conj(g(x - (1 - tau) y)) dy,
/// sampled on the same grid as cross_wigner.
PhaseSpaceField tau_wigner(const Signal& f, const Signal& g, double tau,
                           const TransformOptions& opt = {});

/// A(f, g)(x, xi) = int e^{-2 pi i xi y} f(y + x/2) conj(g(y - x/2)) dy.
PhaseSpaceField ambiguity(const Signal& f, const Signal& g,
                          const std::optional<Window>& window = std::nullopt);

/// Average of tau_wigner over tau in (0, 1) by Gauss-Legendre quadrature in
/// u with tau = (1 - cos(pi u))/2. Node count doubles until the maximum
/// change drops below quad.tol * max|W|; ConvergenceError past max_nodes.
PhaseSpaceField born_jordan(const Signal& f, const Signal& g, const QuadSpec& quad = {},
                            const TransformOptions& opt = {});

/// c_tau(a, b) = ((1 - tau) x_a + tau x_b, tau xi_a + (1 - tau) xi_b).
PhasePoint covariance_center(PhasePoint a, PhasePoint b, double tau = 0.5);

}  // namespace psl
