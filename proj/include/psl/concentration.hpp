#pragma once

#include <limits>
#include <optional>

#include "psl/mask.hpp"
#include "psl/transforms.hpp"

namespace psl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (cell_area * sum_Omega |w|^p)^{1/p}; the maximum over Omega for p = inf.
double lp_norm(const PhaseSpaceField& w, const DomainMask& mask, double p);
/// The same norm over every stored cell.
double lp_norm(const PhaseSpaceField& w, double p);

/// Transform options that reproduce the mask's grid (oversampling and window).
TransformOptions options_for(const PhaseGrid& grid);

struct ConcentrationOptions {
  double tau = 0.5;  ///< used by TauWigner
  QuadSpec quad{};   ///< used by BornJordan
};

/// The distribution of f of the given kind, sampled on the mask's grid.
PhaseSpaceField distribution(const Signal& f, FieldKind kind, const DomainMask& mask,
                             const ConcentrationOptions& opt = {});

/// J(f) = lp_norm(D f, mask, p) / energy(f) for the distribution D of `kind`.
double concentration_value(const Signal& f, const DomainMask& mask, double p,
                           FieldKind kind = FieldKind::Wigner,
                           const ConcentrationOptions& opt = {});

/// C_p = ((1/2pi) int_0^{2pi} |cos t|^p dt)^{1/p} by adaptive quadrature.
double visibility_constant(double p);
/// Same constant from ((1/pi) B((p+1)/2, 1/2))^{1/p}.
double visibility_constant_beta(double p);

/// S = 2 Re W(pi(a) f, pi(b) g) on the given grid options. Throws
/// GuardViolation when a shifted packet reaches the grid edges.
PhaseSpaceField interference_block(const Signal& f, const Signal& g, PhasePoint a, PhasePoint b,
                                   const TransformOptions& opt = {});

struct InterferencePrediction {
  double limit = 0.0;                  ///< 2 C_p ||W(f, g)||_{L^p(Omega - c)}
  std::optional<double> upper_bound;   ///< L_est (||f||^2 + ||g||^2)
};

InterferencePrediction interference_limit_prediction(const Signal& f, const Signal& g,
                                                     PhasePoint c, const DomainMask& mask,
                                                     double p,
                                                     std::optional<double> l_est = std::nullopt);

struct ExtremalPairReport {
  double orthogonality_defect = 0.0;  ///< |<f, g>| / (||f|| ||g||)
  double antiwigner_defect = 0.0;     ///< ||Wf + Wg|| / (||Wf|| + ||Wg||) on Omega
};

ExtremalPairReport extremal_pair_diagnostic(const Signal& f, const Signal& g,
                                            const DomainMask& mask, double p);

}  // namespace psl
