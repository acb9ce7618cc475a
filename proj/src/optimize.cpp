#include "psl/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psl/error.hpp"
#include "psl/parallel.hpp"
#include "psl/quadrature.hpp"
#include "psl/serialize.hpp"
#include "psl/weyl.hpp"

namespace psl {

namespace {

constexpr double kPi = std::numbers::pi;

PhaseSpaceField masked_wigner(const Signal& f, const AscentConfig& cfg) {
  if (!(f.grid() == cfg.mask.grid().xgrid))
    throw GridMismatch("signal does not live on the mask's signal grid");
  return wigner(f, options_for(cfg.mask.grid()));
}

// Re <f, g>.
double real_inner(const Signal& f, const Signal& g) { return inner(f, g).real(); }

Signal gradient_from_field(const Signal& f, const PhaseSpaceField& w, const AscentConfig& cfg) {
  const double p = cfg.p;
  const auto& cells = cfg.mask.cells();
  double top = 0.0, bottom = kInf;
  for (std::size_t k = 0; k < w.values.size(); ++k)
    if (cells[k]) {
      const double v = std::abs(w.values[k].real());
      top = std::max(top, v);
      bottom = std::min(bottom, v);
    }
  const double eps = 1e-8 * top;
  if (p - 1.0 < 1e-3 && bottom <= eps)
    throw NonSmoothPoint("objective is not differentiable: Wf vanishes on the mask at p ~ 1");
  std::vector<double> symbol(w.values.size(), 0.0);
  for (std::size_t k = 0; k < w.values.size(); ++k) {
    if (!cells[k]) continue;
    const double v = w.values[k].real();
    if (v == 0.0) continue;
    const double mag = p < 2.0 ? std::sqrt(v * v + eps * eps) : std::abs(v);
    symbol[k] = p * std::pow(mag, p - 2.0) * v;
  }
  return WeylOperator(w.grid, symbol).apply(f).scaled(2.0);
}

}  // namespace

void AscentConfig::validate() const {
  if (!(p >= 1.0) || std::isinf(p)) throw InvalidArgument("ascent needs a finite p >= 1");
  if (kind != FieldKind::Wigner) throw InvalidArgument("ascent supports the Wigner kind only");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
  if (max_iter < 1 || patience < 1) throw InvalidArgument("max_iter and patience must be positive");
  if (!(step.initial_step > 0.0) || !(step.shrink > 0.0 && step.shrink < 1.0) ||
      !(step.sufficient_increase >= 0.0 && step.sufficient_increase < 1.0) ||
      !(step.min_step > 0.0) || !(step.max_step >= step.initial_step))
    throw InvalidArgument("invalid step policy");
}

double objective_power(const Signal& f, const AscentConfig& cfg) {
  return std::pow(lp_norm(masked_wigner(f, cfg), cfg.mask, cfg.p), cfg.p);
}

double objective(const Signal& f, const AscentConfig& cfg) {
  const double e = f.energy();
  if (!(e > 0.0)) throw InvalidArgument("objective of the zero signal is undefined");
  return lp_norm(masked_wigner(f, cfg), cfg.mask, cfg.p) / e;
}

Signal gradient(const Signal& f, const AscentConfig& cfg) {
  if (!(f.energy() > 0.0)) throw InvalidArgument("gradient at the zero signal is undefined");
  if (std::isinf(cfg.p)) throw InvalidArgument("gradient needs a finite p");
  return gradient_from_field(f, masked_wigner(f, cfg), cfg);
}

Signal normalized_gradient(const Signal& f, const AscentConfig& cfg) {
  const double e = f.energy();
  if (!(e > 0.0)) throw InvalidArgument("gradient at the zero signal is undefined");
  const PhaseSpaceField w = masked_wigner(f, cfg);
  const double norm = lp_norm(w, cfg.mask, cfg.p);
  const Signal gf = gradient_from_field(f, w, cfg);
  // J = F^{1/p} / E, dF^{1/p} = (1/p) F^{1/p - 1} dF, dE = 2 Re <f, .>.
  const double outer = norm > 0.0 ? std::pow(norm, 1.0 - cfg.p) / (cfg.p * e) : 0.0;
  return gf.scaled(outer).axpy(-2.0 * norm / (e * e), f);
}

std::vector<Signal> initial_dictionary(const AscentConfig& cfg, std::size_t count) {
  const Grid1D g = cfg.mask.grid().xgrid;
  const PhaseGrid& pg = cfg.mask.grid();
  const PhasePoint c = cfg.mask.centroid();
  const auto members = cfg.mask.members();
  std::vector<Signal> out;
  out.reserve(count);
  auto push = [&](Signal s) {
    if (out.size() < count) out.push_back(normalized(half_band_project(s)));
  };
  push(gaussian(g, c));
  for (std::size_t k = 0; k < 8; ++k) {
    const auto [i, j] = members[(2 * k + 1) * members.size() / 16];
    push(gaussian(g, {pg.x(i), pg.xi(j)}));
  }
  push(tf_shift(hermite(g, 1), c));
  for (std::size_t k = 0; out.size() < count; ++k) {
    const Signal r = random_signal(cfg.seed * 1000003u + k, 0.5 * g.half_band(), g);
    const Signal env = gaussian(g, {c.x, 0.0}, 2.0);
    std::vector<cplx> v(g.n);
    for (std::size_t m = 0; m < g.n; ++m) v[m] = r[m] * env[m];
    push(modulate(Signal(g, std::move(v)), c.xi));
  }
  return out;
}

AscentRun ascend(const Signal& init, const AscentConfig& cfg) {
  cfg.validate();
  AscentRun run;
  Signal f = normalized(half_band_project(init));
  double value = objective(f, cfg);
  run.trace.push_back(value);
  double step = cfg.step.initial_step;
  std::size_t quiet = 0;
  for (std::size_t it = 0; it < cfg.max_iter; ++it) {
    Signal g;
    try {
      g = half_band_project(normalized_gradient(f, cfg));
    } catch (const NonSmoothPoint&) {
      break;
    }
    // J is scale invariant, so its gradient is tangent to the sphere up to
    // rounding; remove the residual radial part.
    g = g.axpy(-real_inner(g, f), f);
    const double g2 = g.energy();
    if (!(g2 > 0.0)) {
      run.converged = true;
      break;
    }
    bool accepted = false;
    Signal trial;
    double trial_value = value;
    while (step >= cfg.step.min_step) {
      trial = normalized(f.axpy(step, g));
      trial_value = objective(trial, cfg);
      if (trial_value >= value + cfg.step.sufficient_increase * step * g2) {
        accepted = true;
        break;
      }
      step *= cfg.step.shrink;
    }
    if (!accepted) {
      // No admissible step: stationary to line-search resolution.
      run.converged = true;
      break;
    }
    const double change = (trial_value - value) / std::max(std::abs(value), 1e-300);
    f = std::move(trial);
    value = trial_value;
    run.trace.push_back(value);
    quiet = change < cfg.tol ? quiet + 1 : 0;
    if (quiet >= cfg.patience) {
      run.converged = true;
      break;
    }
    step = std::min(step / cfg.step.shrink, cfg.step.max_step);
  }
  run.value = value;
  run.signal = std::move(f);
  return run;
}

AscentReport maximize(const AscentConfig& cfg) {
  cfg.validate();
  const std::vector<Signal> starts = initial_dictionary(cfg, cfg.restarts);
  AscentReport report;
  report.runs.resize(starts.size());
  parallel_for_ranges(0, starts.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) report.runs[k] = ascend(starts[k], cfg);
  });
  std::size_t best = 0;
  for (std::size_t k = 0; k < report.runs.size(); ++k) {
    report.restart_values.push_back(report.runs[k].value);
    const double lead = report.runs[best].value;
    if (report.runs[k].value > lead + cfg.tol * std::max(1.0, std::abs(lead))) best = k;
  }
  report.best_restart = best;
  report.best_value = report.runs[best].value;
  report.best_signal = report.runs[best].signal;
  report.trace = report.runs[best].trace;
  report.converged = report.runs[best].converged;
  return report;
}

nlohmann::ordered_json ascent_report_to_json(const AscentReport& report, const AscentConfig& cfg) {
  nlohmann::ordered_json j;
  auto& c = j["config"];
  c["p"] = cfg.p;
  c["kind"] = to_string(cfg.kind);
  c["grid"] = phase_grid_to_json(cfg.mask.grid());
  c["mask_cells"] = cfg.mask.count();
  c["mask_measure"] = cfg.mask.measure();
  c["max_iter"] = cfg.max_iter;
  c["tol"] = cfg.tol;
  c["patience"] = cfg.patience;
  c["restarts"] = cfg.restarts;
  c["seed"] = cfg.seed;
  c["step"] = {{"initial_step", cfg.step.initial_step},
               {"shrink", cfg.step.shrink},
               {"sufficient_increase", cfg.step.sufficient_increase},
               {"min_step", cfg.step.min_step},
               {"max_step", cfg.step.max_step}};
  j["best_value"] = report.best_value;
  j["best_restart"] = report.best_restart;
  j["converged"] = report.converged;
  j["restart_values"] = report.restart_values;
  j["trace"] = report.trace;
  return j;
}

std::vector<Eigenpair> localization_eigenpairs(const DomainMask& mask, std::size_t count,
                                               const PowerOptions& opt) {
  const PhaseGrid& pg = mask.grid();
  std::vector<double> symbol(mask.cells().begin(), mask.cells().end());
  const WeylOperator T(pg, symbol);
  const Grid1D g = pg.xgrid;
  const double shift = 2.0 * mask.measure();
  auto op = [&](const Signal& v) { return half_band_project(T.apply(v)); };
  std::vector<Eigenpair> found;
  auto deflate = [&](Signal v) {
    // Two Gram-Schmidt passes against the converged vectors.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : found) v = v.axpy(-inner(v, e.vector), e.vector);
    return v;
  };
  for (std::size_t k = 0; k < count; ++k) {
    Signal v = normalized(deflate(half_band_project(random_signal(opt.seed + k, g.half_band(), g))));
    bool done = false;
    Eigenpair e;
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
      const Signal tv = op(v);
      const double mu = real_inner(tv, v);
      const double residual = tv.axpy(-mu, v).norm();
      if (residual <= opt.tol * std::max(1.0, std::abs(mu))) {
        e = {mu, v, it};
        done = true;
        break;
      }
      v = normalized(deflate(tv.axpy(shift, v)));
    }
    if (!done) throw ConvergenceError("power iteration did not converge within max_iter");
    found.push_back(std::move(e));
  }
  return found;
}

Eigenpair localization_baseline(const DomainMask& mask, const PowerOptions& opt) {
  return localization_eigenpairs(mask, 1, opt).front();
}

LinftyResult linfty_optimizer(const DomainMask& mask, FieldKind kind, bool odd) {
  if (kind != FieldKind::Wigner) throw InvalidArgument("linfty_optimizer supports the Wigner kind only");
  const PhaseGrid& pg = mask.grid();
  const PhasePoint c = mask.centroid();
  double best = kInf;
  PhasePoint center{};
  for (const auto& [i, j] : mask.members()) {
    const PhasePoint z{pg.x(i), pg.xi(j)};
    const double d = (z - c).norm();
    if (d < best) {
      best = d;
      center = z;
    }
  }
  const Grid1D g = pg.xgrid;
  LinftyResult out;
  out.center = center;
  out.signal = tf_shift(odd ? hermite(g, 1) : gaussian(g), center);
  const PhaseSpaceField w = wigner(out.signal, options_for(pg));
  out.value = lp_norm(w, mask, kInf) / out.signal.energy();
  return out;
}

namespace {

// Largest |log t| a profile may reach before e^{u} leaves the double range.
constexpr double kLogReach = 700.0;

double log_profile(double u, double sigma) { return std::exp(-0.5 * u * u / (sigma * sigma)); }

void check_reach(double sigma, double shift) {
  if (!(sigma > 0.0)) throw InvalidArgument("family widths must be positive");
  if (9.0 * sigma + shift > kLogReach)
    throw GuardViolation("log-coordinate profile leaves the representable range");
}

// int_R f(tau y) conj f(-(1 - tau) y) dy with y = +-e^u and
// f(t) = |t|^{-1/2} h(log|t|) (times sign(t) when odd).
double tau_value_at_zero(double tau, double one_minus_tau, double sigma, bool odd) {
  const double a = std::log(tau), b = std::log(one_minus_tau);
  // h is negligible (below e^{-40}) past 9 sigma, so only the overlap of the
  // two shifted supports contributes.
  const double lo = std::max(-a, -b) - 9.0 * sigma, hi = std::min(-a, -b) + 9.0 * sigma;
  if (lo >= hi) return 0.0;
  auto f = [sigma](double t) { return log_profile(std::log(t), sigma) / std::sqrt(t); };
  const double half = integrate_adaptive(
      [&](double u) {
        const double y = std::exp(u);
        return y * f(tau * y) * f(one_minus_tau * y);
      },
      lo, hi, 1e-13);
  // Both half lines contribute equally; for odd f each carries a minus sign.
  return (odd ? -2.0 : 2.0) * half;
}

double profile_energy(double sigma) {
  // ||f||^2 = 2 int_0^inf |f(t)|^2 dt = 2 int h(u)^2 du.
  return 2.0 * std::sqrt(kPi) * sigma;
}

}  // namespace

LinftyFamily tau_linfty_family(double tau, const std::vector<double>& sigmas, bool odd) {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("tau must lie in (0, 1)");
  if (tau == 0.5)
    throw InvalidArgument("tau = 1/2 is the Wigner case, where the supremum is attained");
  if (sigmas.empty()) throw InvalidArgument("family needs at least one width");
  LinftyFamily out;
  out.sup_predicted = 1.0 / std::sqrt(tau * (1.0 - tau));
  for (double s : sigmas) {
    check_reach(s, std::abs(std::log(tau)) + std::abs(std::log1p(-tau)));
    out.sigmas.push_back(s);
    out.values.push_back(tau_value_at_zero(tau, 1.0 - tau, s, odd) / profile_energy(s));
  }
  return out;
}

namespace {

std::vector<double> dyadic_widths(int m) {
  if (m < 1) throw InvalidArgument("family size m must be at least 1");
  std::vector<double> s;
  for (int k = 0; k < m; ++k) s.push_back(std::ldexp(1.0, k));
  return s;
}

}  // namespace

LinftyFamily tau_linfty_family(double tau, int m, bool odd) {
  return tau_linfty_family(tau, dyadic_widths(m), odd);
}

LinftyFamily bj_linfty_family(const std::vector<double>& sigmas, bool odd) {
  if (sigmas.empty()) throw InvalidArgument("family needs at least one width");
  LinftyFamily out;
  out.sup_predicted = kPi;
  for (double s : sigmas) {
    check_reach(s, 0.0);
    // With tau = 1 / (1 + e^{-s}) the average is int W_tau f(0) tau (1 - tau) ds,
    // smooth in s and decaying like e^{-|s|/2}; |s| <= 80 leaves below 1e-17.
    const QuadRule rule = composite_gauss_legendre(-80.0, 80.0, 160);
    double avg = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double e = std::exp(-std::abs(rule.nodes[k]));
      const double tau = rule.nodes[k] >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
      const double rest = rule.nodes[k] >= 0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
      check_reach(s, std::abs(std::log(tau)) + std::abs(std::log(rest)));
      avg += rule.weights[k] * tau * rest * tau_value_at_zero(tau, rest, s, odd);
    }
    out.sigmas.push_back(s);
    out.values.push_back(avg / profile_energy(s));
  }
  out.khat_check = khat_deviation();
  return out;
}

LinftyFamily bj_linfty_family(int m, bool odd) { return bj_linfty_family(dyadic_widths(m), odd); }

double khat_deviation() {
  const double h = 1.0 / 32, reach = 60.0;
  const auto steps = static_cast<long>(reach / h);
  double worst = 0.0;
  for (int q = -64; q <= 64; ++q) {
    const double xi = q / 64.0;
    // k is even, so its transform is the cosine integral.
    double sum = 0.0;
    for (long m = -steps; m <= steps; ++m) {
      const double t = m * h;
      const double w = (m == -steps || m == steps) ? 0.5 : 1.0;
      sum += w * std::cos(2 * kPi * xi * t) / (2.0 * std::cosh(0.5 * t));
    }
    worst = std::max(worst, std::abs(h * sum - kPi / std::cosh(2 * kPi * kPi * xi)));
  }
  return worst;
}

}  // namespace psl
