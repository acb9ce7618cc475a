#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "psl/concentration.hpp"

namespace psl {

struct StepPolicy {
  double initial_step = 0.5;
  double shrink = 0.5;                 ///< backtracking factor in (0, 1)
  double sufficient_increase = 1e-4;   ///< Armijo constant in [0, 1)
  double min_step = 1e-14;
  double max_step = 64.0;
};

/// Maximization of J(f) = ||Wf||_{L^p(mask)} / ||f||^2 over half-band signals
/// on the mask's signal grid. Only the Wigner kind is supported.
struct AscentConfig {
  DomainMask mask;
  double p = 2.0;
  FieldKind kind = FieldKind::Wigner;
  std::size_t max_iter = 2000;
  double tol = 1e-8;          ///< relative objective change
  std::size_t patience = 5;   ///< consecutive small changes before stopping
  std::size_t restarts = 10;
  std::uint64_t seed = 1;
  StepPolicy step{};

  /// Throws InvalidArgument on the first broken precondition.
  void validate() const;
};

/// One projected-gradient run from a single initialization.
struct AscentRun {
  double value = 0.0;
  Signal signal;
  std::vector<double> trace;  ///< J of the initial iterate, then after every accepted step
  bool converged = false;
};

struct AscentReport {
  double best_value = 0.0;
  Signal best_signal;
  std::vector<double> trace;  ///< trace of the winning restart
  bool converged = false;
  std::vector<double> restart_values;
  std::size_t best_restart = 0;
  std::vector<AscentRun> runs;
};

/// F(f) = lp_norm(Wf, mask, p)^p.
double objective_power(const Signal& f, const AscentConfig& cfg);
/// J(f) = lp_norm(Wf, mask, p) / energy(f).
double objective(const Signal& f, const AscentConfig& cfg);

/// Gradient of F with respect to (Re f, Im f) in the real inner product
/// Re <., .>: 2 T_a f with a = p |Wf|^{p-2} Wf on the mask. For p < 2 the
/// power is regularized as (|Wf|^2 + eps^2)^{(p-2)/2} with eps = 1e-8 max|Wf|.
/// Throws NonSmoothPoint when p is within 1e-3 of 1 and Wf vanishes on a
/// mask cell.
Signal gradient(const Signal& f, const AscentConfig& cfg);
/// Gradient of J by the quotient rule.
Signal normalized_gradient(const Signal& f, const AscentConfig& cfg);

/// Initial iterates in restart order: Gaussian at the mask centroid,
/// Gaussians at 8 quantiles of the member cells (row-major), Hermite-1 at the
/// centroid, then seeded random band-limited packets. Truncated to `count`.
std::vector<Signal> initial_dictionary(const AscentConfig& cfg, std::size_t count);

/// Projected ascent from `init`. Every iterate is half-band projected and
/// renormalized; trial steps are accepted only on sufficient increase, so
/// the trace is nondecreasing.
AscentRun ascend(const Signal& init, const AscentConfig& cfg);

/// Multistart ascent over initial_dictionary(cfg, cfg.restarts). The winner
/// is the largest value; values within tol of each other go to the lowest
/// restart index.
AscentReport maximize(const AscentConfig& cfg);

nlohmann::ordered_json ascent_report_to_json(const AscentReport& report, const AscentConfig& cfg);

struct PowerOptions {
  std::size_t max_iter = 200000;
  double tol = 1e-10;  ///< residual ||Tv - mu v|| relative to max(1, |mu|)
  std::uint64_t seed = 7;
};

struct Eigenpair {
  double value = 0.0;
  Signal vector;
  std::size_t iterations = 0;
};

/// Leading eigenpairs of P T P, with T the Weyl quantization of the mask
/// indicator and P the half-band projection. Power iteration on the shifted
/// operator P T P + 2 measure I, deflating found vectors. Throws
/// ConvergenceError past max_iter.
std::vector<Eigenpair> localization_eigenpairs(const DomainMask& mask, std::size_t count,
                                               const PowerOptions& opt = {});
Eigenpair localization_baseline(const DomainMask& mask, const PowerOptions& opt = {});

struct LinftyResult {
  double value = 0.0;
  Signal signal;
  PhasePoint center;
};

/// f = pi(c) g for the member cell c nearest the centroid, g the Gaussian
/// (or Hermite-1 when `odd`), value = lp_norm(Wf, mask, inf) / energy(f).
LinftyResult linfty_optimizer(const DomainMask& mask, FieldKind kind = FieldKind::Wigner,
                              bool odd = false);

struct LinftyFamily {
  std::vector<double> sigmas;
  std::vector<double> values;
  double sup_predicted = 0.0;
  std::optional<double> khat_check;
};

/// Profiles f(t) = |t|^{-1/2} h_sigma(log|t|) with h_sigma(u) = e^{-u^2/(2 sigma^2)},
/// even (or odd, with sign(t)). Values are evaluated in the continuum by
/// quadrature in the log coordinate. Throws GuardViolation once the profile
/// reaches log|t| beyond the double exponent range.
LinftyFamily tau_linfty_family(double tau, const std::vector<double>& sigmas, bool odd = false);
/// sigma = 2^0 .. 2^{m-1}.
LinftyFamily tau_linfty_family(double tau, int m, bool odd = false);

/// W_BJ f(0) / ||f||^2 for the same profiles, with the tau average done by
/// Gauss-Legendre quadrature in s = log(tau / (1 - tau)); khat_check is the largest deviation of the trapezoid Fourier
/// transform of k(t) = 1/(2 cosh(t/2)) on |t| <= 60 from pi sech(2 pi^2 xi).
LinftyFamily bj_linfty_family(const std::vector<double>& sigmas, bool odd = false);
LinftyFamily bj_linfty_family(int m, bool odd = false);

double khat_deviation();

}  // namespace psl
