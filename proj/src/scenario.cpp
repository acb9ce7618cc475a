#include "psl/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "psl/chain_graph.hpp"
#include "psl/concentration.hpp"
#include "psl/error.hpp"
#include "psl/mask.hpp"
#include "psl/optimize.hpp"
#include "psl/serialize.hpp"

namespace psl {

namespace {

using json = nlohmann::json;

const std::vector<std::string> kScenarios = {
    "interference-limit", "semicontinuity", "maximize",         "linfty",     "tau-sup",
    "bj-sup",             "lieb-check",     "covariance-check", "chain-graph"};

const std::set<std::string> kTopKeys = {"scenario", "grid",       "mask",       "p",
                                        "p_list",   "kind",       "tau",        "r_list",
                                        "xi_list",  "sigma_list", "seed",       "samples",
                                        "restarts", "max_iter",   "output"};

const std::set<std::string> kShapes = {"disk", "annulus", "rectangle", "almost-full", "file"};

bool is_power_of_two(std::uint64_t n) { return n >= 4 && (n & (n - 1)) == 0; }

// Collects violations while reading a JSON object with typed accessors.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void add(std::string msg) { errors_.push_back(std::move(msg)); }

  std::optional<double> number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_number()) {
      add(where + key + " must be a number");
      return std::nullopt;
    }
    return j[key].get<double>();
  }
  std::optional<std::uint64_t> count(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_number_integer() || j[key].get<long long>() < 0) {
      add(where + key + " must be a nonnegative integer");
      return std::nullopt;
    }
    return j[key].get<std::uint64_t>();
  }
  std::optional<std::string> text(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_string()) {
      add(where + key + " must be a string");
      return std::nullopt;
    }
    return j[key].get<std::string>();
  }
  std::optional<std::vector<double>> list(const json& j, const std::string& key) {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_array() || j[key].empty()) {
      add(key + " must be a nonempty list of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& v : j[key]) {
      if (!v.is_number()) {
        add(key + " must be a nonempty list of numbers");
        return std::nullopt;
      }
      out.push_back(v.get<double>());
    }
    return out;
  }
  void unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) add("unknown key '" + where + k + "'");
  }

 private:
  std::vector<std::string>& errors_;
};

std::optional<Window> read_window(Reader& rd, const json& j, const std::string& where) {
  if (!j.is_object()) {
    rd.add(where + " must be an object");
    return std::nullopt;
  }
  rd.unknown_keys(j, {"x_min", "x_max", "xi_min", "xi_max"}, where + ".");
  auto x0 = rd.number(j, "x_min", where + "."), x1 = rd.number(j, "x_max", where + ".");
  auto y0 = rd.number(j, "xi_min", where + "."), y1 = rd.number(j, "xi_max", where + ".");
  if (!x0 || !x1 || !y0 || !y1) {
    rd.add(where + " needs x_min, x_max, xi_min and xi_max");
    return std::nullopt;
  }
  if (!(*x0 < *x1) || !(*y0 < *y1)) {
    rd.add(where + " must satisfy x_min < x_max and xi_min < xi_max");
    return std::nullopt;
  }
  return Window{*x0, *x1, *y0, *y1};
}

struct Defaults {
  GridSpec grid;
  std::vector<double> r_list, xi_list, sigma_list, p_list;
  std::size_t samples = 0;
  std::optional<double> tau;
};

Defaults defaults_for(const std::string& scenario) {
  Defaults d;
  if (scenario == "interference-limit") {
    d.grid = {2048, 1.0 / 16, 8, std::nullopt};
    d.r_list = {2, 4, 8, 16, 32};
  } else if (scenario == "semicontinuity") {
    d.grid = {4096, 1.0 / 512, 1, std::nullopt};
    d.xi_list = {2, 4, 8, 16};
  } else if (scenario == "tau-sup") {
    d.tau = 0.25;
    d.sigma_list = {1, 2, 4, 8, 16, 32};
  } else if (scenario == "bj-sup") {
    d.sigma_list = {1, 2, 4, 8, 16, 32};
  } else if (scenario == "lieb-check") {
    d.samples = 200;
    d.p_list = {1, 2, 4, 8};
  } else if (scenario == "covariance-check") {
    d.samples = 20;
  } else if (scenario == "chain-graph") {
    d.samples = 1000;
  }
  return d;
}

// Parses into `out` while recording every violation.
void read_config(const json& j, std::vector<std::string>& errors, ScenarioConfig& out) {
  Reader rd(errors);
  if (!j.is_object()) {
    rd.add("config must be a JSON object");
    return;
  }
  rd.unknown_keys(j, kTopKeys, "");
  const auto name = rd.text(j, "scenario", "");
  if (!name) {
    if (!j.contains("scenario")) rd.add("scenario is required");
  } else if (std::find(kScenarios.begin(), kScenarios.end(), *name) == kScenarios.end()) {
    rd.add("unknown scenario '" + *name + "'");
  } else {
    out.scenario = *name;
  }
  const Defaults d = defaults_for(out.scenario);
  out.grid = d.grid;
  out.r_list = d.r_list;
  out.xi_list = d.xi_list;
  out.sigma_list = d.sigma_list;
  out.p_list = d.p_list;
  out.samples = d.samples;
  out.tau = d.tau;

  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) {
      rd.add("grid must be an object");
    } else {
      rd.unknown_keys(g, {"n", "dt", "xi_oversample", "window"}, "grid.");
      if (auto n = rd.count(g, "n", "grid.")) {
        if (!is_power_of_two(*n)) rd.add("grid.n must be a power of two >= 4");
        out.grid.n = *n;
      }
      if (auto dt = rd.number(g, "dt", "grid.")) {
        if (!(*dt > 0.0)) rd.add("grid.dt must be positive");
        out.grid.dt = *dt;
      }
      if (auto q = rd.count(g, "xi_oversample", "grid.")) {
        if (*q < 1) rd.add("grid.xi_oversample must be at least 1");
        out.grid.xi_oversample = *q;
      }
      if (g.contains("window")) out.grid.window = read_window(rd, g["window"], "grid.window");
    }
  }

  if (j.contains("mask")) {
    const json& m = j["mask"];
    if (!m.is_object()) {
      rd.add("mask must be an object");
    } else {
      rd.unknown_keys(m, {"shape", "center", "radius", "inner_radius", "box", "file"}, "mask.");
      if (auto s = rd.text(m, "shape", "mask.")) {
        if (!kShapes.count(*s))
          rd.add("mask.shape must be one of disk, annulus, rectangle, almost-full, file");
        else
          out.mask.shape = *s;
      }
      if (m.contains("center")) {
        const json& c = m["center"];
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
          rd.add("mask.center must be a list [x, xi]");
        else
          out.mask.center = {c[0].get<double>(), c[1].get<double>()};
      }
      if (auto r = rd.number(m, "radius", "mask.")) {
        if (!(*r > 0.0)) rd.add("mask.radius must be positive");
        out.mask.radius = *r;
      }
      if (auto r = rd.number(m, "inner_radius", "mask.")) {
        if (!(*r >= 0.0)) rd.add("mask.inner_radius must be nonnegative");
        out.mask.inner_radius = *r;
      }
      if (out.mask.shape == "annulus" && !(out.mask.inner_radius < out.mask.radius))
        rd.add("mask.inner_radius must be below mask.radius");
      if (m.contains("box")) {
        if (auto w = read_window(rd, m["box"], "mask.box")) out.mask.box = *w;
      }
      if (auto f = rd.text(m, "file", "mask.")) out.mask.file = *f;
      if (out.mask.shape == "file") {
        if (out.mask.file.empty())
          rd.add("mask.file is required for shape 'file'");
        else if (!std::filesystem::exists(out.mask.file))
          rd.add("mask file '" + out.mask.file + "' does not exist");
        else if (!std::filesystem::exists(out.mask.file + ".json"))
          rd.add("mask sidecar '" + out.mask.file + ".json' does not exist");
      }
    }
  }

  if (auto p = rd.number(j, "p", "")) {
    if (!(*p >= 1.0)) rd.add("p must be >= 1");
    out.p = *p;
  }
  if (auto l = rd.list(j, "p_list")) {
    for (double p : *l)
      if (!(p >= 1.0)) {
        rd.add("p_list entries must be >= 1");
        break;
      }
    out.p_list = *l;
  }
  if (auto k = rd.text(j, "kind", "")) {
    try {
      out.kind = field_kind_from_string(*k);
    } catch (const Error&) {
      rd.add("unknown kind '" + *k + "'");
    }
  }
  if (auto t = rd.number(j, "tau", "")) {
    if (!(*t > 0.0 && *t < 1.0)) rd.add("tau must lie in (0, 1)");
    out.tau = *t;
  }
  auto positive_list = [&](const char* key, std::vector<double>& dst) {
    if (auto l = rd.list(j, key)) {
      for (double v : *l)
        if (!(v > 0.0) || !std::isfinite(v)) {
          rd.add(std::string(key) + " entries must be positive");
          break;
        }
      dst = *l;
    }
  };
  positive_list("r_list", out.r_list);
  positive_list("xi_list", out.xi_list);
  positive_list("sigma_list", out.sigma_list);
  if (auto s = rd.count(j, "seed", "")) out.seed = *s;
  if (auto s = rd.count(j, "samples", "")) {
    if (*s < 1) rd.add("samples must be at least 1");
    out.samples = *s;
  }
  if (auto s = rd.count(j, "restarts", "")) {
    if (*s < 1) rd.add("restarts must be at least 1");
    out.restarts = *s;
  }
  if (auto s = rd.count(j, "max_iter", "")) {
    if (*s < 1) rd.add("max_iter must be at least 1");
    out.max_iter = *s;
  }
  if (auto o = rd.text(j, "output", "")) out.output = *o;

  // Scenario-specific preconditions.
  const std::string& sc = out.scenario;
  if ((sc == "maximize" || sc == "linfty") && out.kind != FieldKind::Wigner)
    rd.add(sc + " supports kind 'wigner' only");
  if (sc == "maximize" && out.mask.shape == "almost-full" && !out.grid.window && out.grid.n > 1024)
    rd.add("maximize over an almost-full mask needs grid.n <= 1024");
  if (sc == "tau-sup" && out.tau && *out.tau == 0.5)
    rd.add("tau = 1/2 is excluded for tau-sup: the supremum is attained there (Wigner regime); "
           "the non-attainment family needs tau in (0, 1) without 1/2");
  if (sc == "chain-graph" && out.tau && *out.tau != 0.5 &&
      !(*out.tau >= 0.1 && *out.tau <= 0.9 && std::abs(*out.tau - 0.5) >= 0.1))
    rd.add("chain-graph needs tau = 1/2 or tau in [0.1, 0.4] or [0.6, 0.9] so that the finite "
           "thresholds imply the escaping hypotheses");
  if (sc == "covariance-check" && out.tau && *out.tau != 0.5)
    rd.add("covariance-check uses the Wigner convention; tau must be 1/2 or absent");
  if (sc == "interference-limit" && std::isinf(out.p)) rd.add("interference-limit needs a finite p");
  if ((sc == "tau-sup" || sc == "bj-sup"))
    for (double s : out.sigma_list)
      if (s > 64.0) {
        rd.add("sigma_list entries must be <= 64 (log-coordinate reach)");
        break;
      }
}

// ---------------------------------------------------------------------------
// Scenario helpers.

PhaseGrid make_grid(const GridSpec& spec, const MaskSpec& mask) {
  const Grid1D g = Grid1D::make(spec.n, spec.dt);
  std::optional<Window> w = spec.window;
  if (!w) {
    const double hx = spec.dt, hxi = 1.0 / (2.0 * spec.xi_oversample * g.length());
    if (mask.shape == "disk" || mask.shape == "annulus")
      w = Window{mask.center.x - mask.radius - hx, mask.center.x + mask.radius + hx,
                 mask.center.xi - mask.radius - hxi, mask.center.xi + mask.radius + hxi};
    else if (mask.shape == "rectangle")
      w = Window{mask.box.x_min - hx, mask.box.x_max + hx, mask.box.xi_min - hxi,
                 mask.box.xi_max + hxi};
  }
  return PhaseGrid::wigner(g, spec.xi_oversample, w);
}

DomainMask make_mask(const MaskSpec& spec, const PhaseGrid& grid) {
  if (spec.shape == "disk") return DomainMask::disk(grid, spec.center, spec.radius);
  if (spec.shape == "annulus")
    return DomainMask::annulus(grid, spec.center, spec.inner_radius, spec.radius);
  if (spec.shape == "rectangle")
    return DomainMask::rectangle(grid, spec.box.x_min, spec.box.x_max, spec.box.xi_min,
                                 spec.box.xi_max);
  if (spec.shape == "file") return read_mask(spec.file);
  return DomainMask::almost_full(grid);
}

DomainMask config_mask(const ScenarioConfig& c) {
  if (c.mask.shape == "file") return read_mask(c.mask.file);
  return make_mask(c.mask, make_grid(c.grid, c.mask));
}

ResultRow row(std::string series, std::optional<double> value, double measured, double predicted,
              Check check = Check::Info, double tol = 0.0) {
  ResultRow r;
  r.series = std::move(series);
  r.value = value;
  r.measured = measured;
  r.predicted = predicted;
  r.defect = relative_defect(measured, predicted);
  r.check = check;
  r.tol = tol;
  switch (check) {
    case Check::Info: r.pass = true; break;
    case Check::Match: r.pass = r.defect <= tol; break;
    case Check::AtMost: r.pass = measured <= predicted + tol; break;
    case Check::AtLeast: r.pass = measured >= predicted - tol; break;
    case Check::Below: r.pass = measured < predicted; break;
  }
  return r;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

std::string csv_of_columns(const std::string& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  out << header << '\n';
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << format_double(r[k]);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Scenarios.

void interference_limit(const ScenarioConfig& c, RunResult& out) {
  const DomainMask mask = config_mask(c);
  const PhaseGrid& pg = mask.grid();
  const Signal g = gaussian(pg.xgrid);
  const TransformOptions opt = options_for(pg);
  out.rows.push_back(row("C_p", std::nullopt, visibility_constant(c.p), visibility_constant_beta(c.p),
                         Check::Match, 1e-10));
  const double limit = interference_limit_prediction(g, g, {}, mask, c.p).limit;
  const double r_max = max_of(c.r_list);
  PhaseSpaceField last;
  for (double r : c.r_list) {
    PhaseSpaceField s = interference_block(g, g, {r, 0.0}, {-r, 0.0}, opt);
    const double measured = lp_norm(s, mask, c.p);
    out.rows.push_back(row("r", r, measured, limit, r == r_max ? Check::Match : Check::Info, 0.02));
    if (r == r_max) last = std::move(s);
  }
  // Fringe slice at the row nearest x = 0 against 2 sqrt2 e^{-2 pi xi^2} cos(4 pi r xi).
  const auto [i0, j0] = pg.nearest({0.0, 0.0});
  (void)j0;
  const double x = pg.x(i0);
  std::vector<std::vector<double>> slice;
  for (std::size_t j = 0; j < pg.bins; ++j) {
    const double xi = pg.xi(j);
    const double model = 2.0 * std::sqrt(2.0) * std::exp(-2.0 * std::numbers::pi * (x * x + xi * xi)) *
                         std::cos(4.0 * std::numbers::pi * r_max * xi);
    slice.push_back({xi, last.at(i0, j).real(), model});
  }
  out.artifacts.push_back({c.scenario + "_slice.csv", csv_of_columns("xi,measured,predicted", slice)});
}

Signal antipodal(const Signal& g, double xi) {
  return tf_shift(g, {0.0, xi}).axpy(1.0, tf_shift(g, {0.0, -xi})).scaled(1.0 / std::sqrt(2.0));
}

void semicontinuity(const ScenarioConfig& c, RunResult& out) {
  const DomainMask mask = config_mask(c);
  const PhaseGrid& pg = mask.grid();
  const Signal g = normalized(gaussian(pg.xgrid));
  const double limit =
      visibility_constant(c.p) * lp_norm(wigner(g, options_for(pg)), mask, c.p) / g.energy();
  // Born-Jordan on a coarser signal grid that still carries the +-xi packets;
  // the tau average of the fast cross term is far cheaper there.
  const GridSpec coarse{512, 1.0 / 128, 1, std::nullopt};
  const DomainMask bj_mask = make_mask(c.mask, make_grid(coarse, c.mask));
  const Signal gc = normalized(gaussian(bj_mask.grid().xgrid));
  const double xi_max = max_of(c.xi_list);
  const std::vector<PhasePoint> probes = {{0, 0},     {0.5, 0},   {-0.5, 0},   {0, 0.5},   {0, -0.5},
                                          {0.5, 0.5}, {-0.5, 0.5}, {0.5, -0.5}, {-0.5, -0.5}};
  for (double xi : c.xi_list) {
    const bool last = xi == xi_max;
    const Signal u = antipodal(g, xi);
    out.rows.push_back(row("wigner", xi, concentration_value(u, mask, c.p), limit,
                           last ? Check::Match : Check::Info, 0.03));
    double proxy = 0.0;
    for (const auto& z : probes)
      proxy = std::max(proxy, std::abs(inner(u, tf_shift(g, z))) / (u.norm() * g.norm()));
    out.rows.push_back(row("proxy", xi, proxy, 0.0, last ? Check::AtMost : Check::Info, 1e-3));
    const Signal uc = antipodal(gc, xi);
    ConcentrationOptions bj;
    bj.quad.tol = 1e-5;
    bj.quad.max_nodes = 4096;
    const double jbj = concentration_value(uc, bj_mask, c.p, FieldKind::BornJordan, bj);
    out.rows.push_back(
        row("born-jordan", xi, jbj, 0.1 * limit, last ? Check::AtMost : Check::Info, 0.0));
  }
}

void maximize_scenario(const ScenarioConfig& c, RunResult& out) {
  AscentConfig cfg{.mask = config_mask(c), .p = c.p, .kind = c.kind};
  cfg.max_iter = c.max_iter;
  cfg.restarts = c.restarts;
  cfg.seed = c.seed;
  const AscentReport rep = maximize(cfg);
  std::size_t drops = 0;
  for (const auto& r : rep.runs)
    for (std::size_t k = 1; k < r.trace.size(); ++k) drops += r.trace[k] < r.trace[k - 1];
  const double bound = 2.0 * std::pow(cfg.mask.measure(), 1.0 / c.p);
  out.rows.push_back(row("coarse-bound", std::nullopt, rep.best_value, bound, Check::AtMost, 0.0));
  const double start = objective(initial_dictionary(cfg, 1).front(), cfg);
  out.rows.push_back(row("gaussian-start", std::nullopt, rep.best_value, start, Check::AtLeast, cfg.tol));
  out.rows.push_back(row("trace-decreases", std::nullopt, static_cast<double>(drops), 0.0,
                         Check::AtMost, 0.0));
  if (c.mask.shape == "almost-full" && c.p == 2.0)
    out.rows.push_back(row("moyal", std::nullopt, rep.best_value, 1.0, Check::Match, 1e-3));
  for (std::size_t k = 0; k < rep.restart_values.size(); ++k)
    out.rows.push_back(row("restart", static_cast<double>(k), rep.restart_values[k], rep.best_value));
  out.artifacts.push_back({c.scenario + "_report.json", ascent_report_to_json(rep, cfg).dump(2) + "\n"});
  std::ostringstream bin;
  write_signal_binary(bin, rep.best_signal);
  out.artifacts.push_back({c.scenario + "_best.bin", bin.str()});
}

void linfty(const ScenarioConfig& c, RunResult& out) {
  const DomainMask mask = config_mask(c);
  out.rows.push_back(row("even", std::nullopt, linfty_optimizer(mask, c.kind, false).value, 2.0,
                         Check::Match, 1e-6));
  out.rows.push_back(row("odd", std::nullopt, linfty_optimizer(mask, c.kind, true).value, 2.0,
                         Check::Match, 1e-6));
}

void family_rows(const LinftyFamily& fam, RunResult& out) {
  for (std::size_t k = 0; k < fam.values.size(); ++k)
    out.rows.push_back(row("sigma", fam.sigmas[k], fam.values[k], fam.sup_predicted, Check::Below));
  const std::size_t top = static_cast<std::size_t>(
      std::max_element(fam.sigmas.begin(), fam.sigmas.end()) - fam.sigmas.begin());
  out.rows.push_back(row("fraction", std::nullopt, fam.values[top] / fam.sup_predicted, 1.0,
                         Check::Match, 0.05));
}

void tau_sup(const ScenarioConfig& c, RunResult& out) {
  family_rows(tau_linfty_family(*c.tau, c.sigma_list), out);
}

void bj_sup(const ScenarioConfig& c, RunResult& out) {
  const LinftyFamily fam = bj_linfty_family(c.sigma_list);
  family_rows(fam, out);
  out.rows.push_back(row("khat", std::nullopt, *fam.khat_check, 0.0, Check::AtMost, 1e-8));
}

// p = 2 is the Moyal equality, so the bound is met to rounding.
constexpr double kLiebSlack = 1e-10;

double lieb_constant(double p) { return std::pow(std::pow(2.0, p - 1.0) / p, 1.0 / p); }

void lieb_check(const ScenarioConfig& c, RunResult& out) {
  const Grid1D g = Grid1D::make(c.grid.n, c.grid.dt);
  const TransformOptions opt{c.grid.xi_oversample, std::nullopt};
  std::vector<double> extreme(c.p_list.size());
  for (std::size_t k = 0; k < c.p_list.size(); ++k) extreme[k] = c.p_list[k] >= 2.0 ? 0.0 : kInf;
  std::size_t violations = 0;
  for (std::size_t s = 0; s < c.samples; ++s) {
    const Signal f = normalized(random_signal(c.seed * 1000003u + s, 0.9 * g.half_band(), g));
    const PhaseSpaceField w = wigner(f, opt);
    for (std::size_t k = 0; k < c.p_list.size(); ++k) {
      const double p = c.p_list[k], v = lp_norm(w, p) / f.energy(), bound = lieb_constant(p);
      // Upper bound for p >= 2, lower bound for p < 2.
      if (p >= 2.0) {
        extreme[k] = std::max(extreme[k], v);
        violations += v > bound * (1.0 + kLiebSlack);
      } else {
        extreme[k] = std::min(extreme[k], v);
        violations += v < bound * (1.0 - kLiebSlack);
      }
    }
  }
  for (std::size_t k = 0; k < c.p_list.size(); ++k) {
    const double p = c.p_list[k];
    out.rows.push_back(row("p", p, extreme[k], lieb_constant(p),
                           p >= 2.0 ? Check::AtMost : Check::AtLeast,
                           kLiebSlack * lieb_constant(p)));
  }
  out.rows.push_back(row("violations", std::nullopt, static_cast<double>(violations), 0.0,
                         Check::AtMost, 0.0));
}

// Seeded sum of Gaussian atoms near the origin.
Signal atoms(Grid1D g, std::mt19937_64& rng) {
  auto unit = [&rng] { return 2.0 * ((static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53) - 1.0; };
  Signal out = Signal::zeros(g);
  for (int k = 0; k < 5; ++k) {
    const PhasePoint z{2.0 * unit(), unit()};
    const double w = 1.0 + 0.3 * unit();
    const cplx a(unit(), unit());
    out = out.axpy(a, gaussian(g, z, w));
  }
  return normalized(out);
}

void covariance_check(const ScenarioConfig& c, RunResult& out) {
  const Grid1D g = Grid1D::make(c.grid.n, c.grid.dt);
  const TransformOptions opt{c.grid.xi_oversample, std::nullopt};
  const double dxi = PhaseGrid::wigner(g, c.grid.xi_oversample).xigrid.dt;
  std::mt19937_64 rng(c.seed);
  auto lattice = [&rng] { return static_cast<long>(rng() % 33) - 16; };
  double worst = 0.0;
  for (std::size_t s = 0; s < c.samples; ++s) {
    const Signal f = atoms(g, rng), h = atoms(g, rng);
    // Endpoints in steps of two cells keep the center c on the grid.
    const PhasePoint a{2 * lattice() * g.dt, 2 * lattice() * dxi};
    const PhasePoint b{2 * lattice() * g.dt, 2 * lattice() * dxi};
    const PhasePoint ctr = covariance_center(a, b), d = a - b;
    const auto base = cross_wigner(f, h, opt);
    const auto moved = cross_wigner(tf_shift(f, a), tf_shift(h, b), opt);
    const long di = std::lround(ctr.x / g.dt), dj = std::lround(ctr.xi / dxi);
    const long rows = static_cast<long>(base.grid.rows), bins = static_cast<long>(base.grid.bins);
    double dev = 0.0;
    // Central half only: the lag and frequency axes wrap near the edges.
    for (long i = rows / 4; i < 3 * rows / 4; ++i)
      for (long j = bins / 4; j < 3 * bins / 4; ++j) {
        const double x = base.grid.x(i), xi = base.grid.xi(j);
        const double phase = std::numbers::pi * (a.xi + b.xi) * (a.x - b.x) +
                             2.0 * std::numbers::pi * (x * d.xi - xi * d.x);
        dev = std::max(dev, std::abs(moved.at(i, j) - std::polar(1.0, phase) * base.at(i - di, j - dj)));
      }
    worst = std::max(worst, dev / base.max_abs());
  }
  out.rows.push_back(row("max-deviation", std::nullopt, worst, 0.0, Check::AtMost, 1e-8));
  out.rows.push_back(row("pairs", std::nullopt, static_cast<double>(c.samples), static_cast<double>(c.samples)));
}

void chain_graph(const ScenarioConfig& c, RunResult& out) {
  const double bound = default_bound_threshold(make_grid(c.grid, c.mask));
  std::size_t violations = 0, skipped = 0, checked = 0, edges = 0, uncovered = 0;
  std::size_t max_in = 0, max_out = 0;
  // Draws failing the separation precondition are replaced, so `samples`
  // families are actually checked.
  for (std::size_t k = 0; checked + violations < c.samples; ++k) {
    if (k >= 20 * c.samples) throw ConvergenceError("too many draws fail the separation precondition");
    const SyntheticFamily fam = synthetic_family(c.seed * 1000003u + k, c.tau);
    const std::size_t count = fam.trajectories.size();
    PairGraph graph;
    try {
      graph = surviving_pair_graph(fam.trajectories, fam.tau, bound);
    } catch (const InvalidArgument&) {
      ++skipped;
      continue;
    } catch (const HypothesisViolation&) {
      ++violations;
      continue;
    }
    ++checked;
    edges += graph.edges.size();
    std::vector<std::size_t> in(count), outd(count);
    for (auto [j, l] : graph.edges) {
      ++outd[j];
      ++in[l];
    }
    for (std::size_t v = 0; v < count; ++v) {
      if (graph.undirected) {
        max_in = std::max(max_in, in[v] + outd[v]);
        max_out = std::max(max_out, in[v] + outd[v]);
      } else {
        max_in = std::max(max_in, in[v]);
        max_out = std::max(max_out, outd[v]);
      }
    }
    std::size_t covered = 0;
    for (const auto& ch : graph.chains()) covered += ch.size();
    uncovered += count - std::min(count, covered);
  }
  out.rows.push_back(row("violations", std::nullopt, static_cast<double>(violations), 0.0,
                         Check::AtMost, 0.0));
  out.rows.push_back(row("max-in-degree", std::nullopt, static_cast<double>(max_in), 1.0, Check::AtMost, 0.0));
  out.rows.push_back(row("max-out-degree", std::nullopt, static_cast<double>(max_out), 1.0, Check::AtMost, 0.0));
  out.rows.push_back(row("uncovered-nodes", std::nullopt, static_cast<double>(uncovered), 0.0, Check::AtMost, 0.0));
  out.rows.push_back(row("families-checked", std::nullopt, static_cast<double>(checked),
                         static_cast<double>(c.samples)));
  out.rows.push_back(row("draws-skipped", std::nullopt, static_cast<double>(skipped), 0.0));
  out.rows.push_back(row("edges", std::nullopt, static_cast<double>(edges), 0.0));
}

template <class E>
[[noreturn]] void rethrow_as(const std::string& scenario, const E& e) {
  throw E(scenario + ": " + e.what());
}

}  // namespace

const std::vector<std::string>& scenario_names() { return kScenarios; }

std::vector<std::string> validate_config(const nlohmann::json& j) {
  std::vector<std::string> errors;
  ScenarioConfig scratch;
  read_config(j, errors, scratch);
  return errors;
}

ScenarioConfig parse_config(const nlohmann::json& j) {
  std::vector<std::string> errors;
  ScenarioConfig c;
  read_config(j, errors, c);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

nlohmann::ordered_json config_to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["scenario"] = c.scenario;
  j["grid"] = {{"n", c.grid.n}, {"dt", c.grid.dt}, {"xi_oversample", c.grid.xi_oversample}};
  if (c.grid.window)
    j["grid"]["window"] = {{"x_min", c.grid.window->x_min},
                           {"x_max", c.grid.window->x_max},
                           {"xi_min", c.grid.window->xi_min},
                           {"xi_max", c.grid.window->xi_max}};
  auto& m = j["mask"];
  m["shape"] = c.mask.shape;
  if (c.mask.shape == "disk" || c.mask.shape == "annulus") {
    m["center"] = {c.mask.center.x, c.mask.center.xi};
    m["radius"] = c.mask.radius;
    if (c.mask.shape == "annulus") m["inner_radius"] = c.mask.inner_radius;
  } else if (c.mask.shape == "rectangle") {
    m["box"] = {{"x_min", c.mask.box.x_min},
                {"x_max", c.mask.box.x_max},
                {"xi_min", c.mask.box.xi_min},
                {"xi_max", c.mask.box.xi_max}};
  } else if (c.mask.shape == "file") {
    m["file"] = c.mask.file;
  }
  j["p"] = c.p;
  if (!c.p_list.empty()) j["p_list"] = c.p_list;
  j["kind"] = to_string(c.kind);
  if (c.tau) j["tau"] = *c.tau;
  if (!c.r_list.empty()) j["r_list"] = c.r_list;
  if (!c.xi_list.empty()) j["xi_list"] = c.xi_list;
  if (!c.sigma_list.empty()) j["sigma_list"] = c.sigma_list;
  j["seed"] = c.seed;
  if (c.samples) j["samples"] = c.samples;
  if (c.scenario == "maximize") {
    j["restarts"] = c.restarts;
    j["max_iter"] = c.max_iter;
  }
  return j;
}

std::string ResultRow::param() const {
  return value ? series + "=" + format_double(*value) : series;
}

double relative_defect(double measured, double predicted) {
  return std::abs(measured - predicted) / std::max(std::abs(predicted), 1e-12);
}

RunResult run(const ScenarioConfig& config) {
  {
    // Re-check the parsed config; a hand-built one may skip parse_config.
    std::vector<std::string> errors;
    ScenarioConfig scratch;
    read_config(config_to_json(config), errors, scratch);
    if (!errors.empty()) throw ConfigError(std::move(errors));
  }
  RunResult out;
  out.config = config;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& s = config.scenario;
  try {
    if (s == "interference-limit") interference_limit(config, out);
    else if (s == "semicontinuity") semicontinuity(config, out);
    else if (s == "maximize") maximize_scenario(config, out);
    else if (s == "linfty") linfty(config, out);
    else if (s == "tau-sup") tau_sup(config, out);
    else if (s == "bj-sup") bj_sup(config, out);
    else if (s == "lieb-check") lieb_check(config, out);
    else if (s == "covariance-check") covariance_check(config, out);
    else if (s == "chain-graph") chain_graph(config, out);
  } catch (const GuardViolation& e) {
    rethrow_as(s, e);
  } catch (const ConvergenceError& e) {
    rethrow_as(s, e);
  } catch (const InvalidArgument& e) {
    rethrow_as(s, e);
  } catch (const GridMismatch& e) {
    rethrow_as(s, e);
  } catch (const FormatError& e) {
    rethrow_as(s, e);
  } catch (const NonSmoothPoint& e) {
    rethrow_as(s, e);
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.series != b.series) return a.series < b.series;
    return a.value.value_or(0.0) < b.value.value_or(0.0);
  });
  for (const auto& r : out.rows) out.passed = out.passed && r.pass;
  return out;
}

std::string result_csv(const RunResult& r) {
  std::ostringstream out;
  out << "param,measured,predicted,defect\n";
  for (const auto& row : r.rows)
    out << row.param() << ',' << format_double(row.measured) << ',' << format_double(row.predicted)
        << ',' << format_double(row.defect) << '\n';
  return out.str();
}

namespace {

const char* check_name(Check c) {
  switch (c) {
    case Check::Info: return "info";
    case Check::Match: return "match";
    case Check::AtMost: return "at-most";
    case Check::AtLeast: return "at-least";
    case Check::Below: return "below";
  }
  return "info";
}

}  // namespace

nlohmann::ordered_json result_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.config.scenario;
  j["config"] = config_to_json(r.config);
  auto& rows = j["rows"];
  rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["param"] = row.param();
    e["measured"] = row.measured;
    e["predicted"] = row.predicted;
    e["defect"] = row.defect;
    e["check"] = check_name(row.check);
    e["tol"] = row.tol;
    e["pass"] = row.pass;
    rows.push_back(std::move(e));
  }
  j["passed"] = r.passed;
  return j;
}

std::vector<std::string> write_outputs(const RunResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& bytes) {
    const auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << bytes;
    written.push_back(path);
  };
  put(r.config.scenario + ".csv", result_csv(r));
  put(r.config.scenario + ".json", result_json(r).dump(2) + "\n");
  for (const auto& a : r.artifacts) put(a.name, a.bytes);
  return written;
}

}  // namespace psl
