#include "psl/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psl/error.hpp"
#include "psl/parallel.hpp"
#include "psl/quadrature.hpp"

namespace psl {

namespace {

void require_p(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("p must be >= 1");
}

}  // namespace

namespace {

double lp_of(std::vector<double>& mags, double cell_area, double p) {
  const double top = mags.empty() ? 0.0 : *std::max_element(mags.begin(), mags.end());
  if (std::isinf(p) || top == 0.0) return top;
  // Scaled by the maximum so that large p neither overflows nor underflows.
  for (auto& v : mags) v = std::pow(v / top, p);
  return top * std::pow(pairwise_sum(mags.data(), mags.size()) * cell_area, 1.0 / p);
}

}  // namespace

double lp_norm(const PhaseSpaceField& w, const DomainMask& mask, double p) {
  require_p(p);
  if (!(w.grid == mask.grid())) throw GridMismatch("field and mask live on different grids");
  std::vector<double> mags;
  mags.reserve(mask.count());
  for (std::size_t k = 0; k < w.values.size(); ++k)
    if (mask.cells()[k]) mags.push_back(std::abs(w.values[k]));
  return lp_of(mags, w.grid.cell_area(), p);
}

double lp_norm(const PhaseSpaceField& w, double p) {
  require_p(p);
  std::vector<double> mags(w.values.size());
  for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::abs(w.values[k]);
  return lp_of(mags, w.grid.cell_area(), p);
}

TransformOptions options_for(const PhaseGrid& grid) {
  TransformOptions opt;
  opt.xi_oversample = std::max<std::size_t>(1, grid.xigrid.n / grid.xgrid.n);
  if (!grid.is_full()) {
    const double hx = 0.5 * grid.xgrid.dt, hxi = 0.5 * grid.xigrid.dt;
    opt.window = Window{grid.x(0) - hx, grid.x(grid.rows - 1) + hx, grid.xi(0) - hxi,
                        grid.xi(grid.bins - 1) + hxi};
  }
  return opt;
}

PhaseSpaceField distribution(const Signal& f, FieldKind kind, const DomainMask& mask,
                             const ConcentrationOptions& opt) {
  const TransformOptions topt = options_for(mask.grid());
  PhaseSpaceField w;
  switch (kind) {
    case FieldKind::Wigner:
    case FieldKind::CrossWigner: w = wigner(f, topt); break;
    case FieldKind::TauWigner: w = tau_wigner(f, f, opt.tau, topt); break;
    case FieldKind::BornJordan: w = born_jordan(f, f, opt.quad, topt); break;
    case FieldKind::Ambiguity: w = ambiguity(f, f, topt.window); break;
  }
  if (!(w.grid == mask.grid())) throw GridMismatch("mask grid is not a grid of this transform");
  return w;
}

double concentration_value(const Signal& f, const DomainMask& mask, double p, FieldKind kind,
                           const ConcentrationOptions& opt) {
  require_p(p);
  const double e = f.energy();
  if (!(e > 0.0)) throw InvalidArgument("concentration of the zero signal is undefined");
  return lp_norm(distribution(f, kind, mask, opt), mask, p) / e;
}

double visibility_constant(double p) {
  require_p(p);
  if (std::isinf(p)) return 1.0;
  const double half = std::numbers::pi / 2;
  const double mean = (2.0 / std::numbers::pi) *
                      integrate_adaptive([p](double t) { return std::pow(std::cos(t), p); }, 0.0, half);
  return std::pow(mean, 1.0 / p);
}

double visibility_constant_beta(double p) {
  require_p(p);
  return std::pow(std::beta(0.5 * (p + 1.0), 0.5) / std::numbers::pi, 1.0 / p);
}

PhaseSpaceField interference_block(const Signal& f, const Signal& g, PhasePoint a, PhasePoint b,
                                   const TransformOptions& opt) {
  const Signal fa = tf_shift(f, a);
  const Signal gb = tf_shift(g, b);
  if (!guard_ok(fa) || !guard_ok(gb))
    throw GuardViolation("interference block: a shifted packet reaches the grid edge");
  PhaseSpaceField s = cross_wigner(fa, gb, opt);
  for (auto& v : s.values) v = 2.0 * v.real();
  s.real = true;
  return s;
}

InterferencePrediction interference_limit_prediction(const Signal& f, const Signal& g,
                                                     PhasePoint c, const DomainMask& mask,
                                                     double p, std::optional<double> l_est) {
  require_p(p);
  if (std::isinf(p)) throw InvalidArgument("interference limit needs a finite p");
  const DomainMask shifted = mask.translated(-c);
  const PhaseSpaceField w = cross_wigner(f, g, options_for(mask.grid()));
  InterferencePrediction out;
  out.limit = 2.0 * visibility_constant(p) * lp_norm(w, shifted, p);
  if (l_est) out.upper_bound = *l_est * (f.energy() + g.energy());
  return out;
}

ExtremalPairReport extremal_pair_diagnostic(const Signal& f, const Signal& g,
                                            const DomainMask& mask, double p) {
  const double nf = f.norm(), ng = g.norm();
  if (!(nf > 0.0) || !(ng > 0.0)) throw InvalidArgument("extremal pair needs nonzero signals");
  ExtremalPairReport r;
  r.orthogonality_defect = std::min(1.0, std::abs(inner(f, g)) / (nf * ng));
  const TransformOptions opt = options_for(mask.grid());
  PhaseSpaceField wf = wigner(f, opt);
  const PhaseSpaceField wg = wigner(g, opt);
  const double denom = lp_norm(wf, mask, p) + lp_norm(wg, mask, p);
  for (std::size_t k = 0; k < wf.values.size(); ++k) wf.values[k] += wg.values[k];
  r.antiwigner_defect = denom > 0.0 ? std::min(1.0, lp_norm(wf, mask, p) / denom) : 0.0;
  return r;
}

}  // namespace psl
