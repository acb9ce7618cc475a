#include "psl/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psl/error.hpp"
#include "psl/parallel.hpp"
#include "psl/quadrature.hpp"

namespace psl {

namespace {

void require_same_grid(const Signal& f, const Signal& g) {
  if (!(f.grid() == g.grid())) throw GridMismatch("signals live on different grids");
}

void require_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("tau must lie in the open interval (0, 1)");
}

// Turns lag rows into field rows. `fill(m, buf)` writes the lag product of
// time sample m into buf[n' mod N] (buf is zeroed beforehand).
template <class Fill>
void lag_fft_rows(PhaseSpaceField& out, const Grid1D& signal, Fill&& fill) {
  const PhaseGrid& pg = out.grid;
  const std::size_t big = pg.xigrid.n;
  const double scale = 2.0 * signal.dt;
  parallel_for_ranges(0, pg.rows, [&](std::size_t lo, std::size_t hi) {
    std::vector<cplx> buf(big);
    for (std::size_t i = lo; i < hi; ++i) {
      std::fill(buf.begin(), buf.end(), cplx{});
      fill(pg.row0 + i, buf);
      fft_forward(buf);
      cplx* row = out.values.data() + i * pg.bins;
      for (std::size_t j = 0; j < pg.bins; ++j) row[j] = scale * buf[(pg.bin0 + j + big / 2) % big];
    }
  });
}

PhaseSpaceField make_field(const PhaseGrid& grid, FieldKind kind, double tau, bool real) {
  PhaseSpaceField out;
  out.grid = grid;
  out.kind = kind;
  out.tau = tau;
  out.real = real;
  out.values.assign(grid.size(), cplx{});
  return out;
}

}  // namespace

PhaseSpaceField cross_wigner(const Signal& f, const Signal& g, const TransformOptions& opt) {
  require_same_grid(f, g);
  const Grid1D sg = f.grid();
  const bool same = &f == &g || std::equal(f.values().begin(), f.values().end(), g.values().begin());
  auto out = make_field(PhaseGrid::wigner(sg, opt.xi_oversample, opt.window),
                        same ? FieldKind::Wigner : FieldKind::CrossWigner, 0.5, same);
  const std::size_t n = sg.n;
  const std::size_t big = out.grid.xigrid.n;
  const auto fv = f.values();
  const auto gv = g.values();
  lag_fft_rows(out, sg, [&](std::size_t m, std::vector<cplx>& buf) {
    const std::size_t reach = std::min(m, n - 1 - m);
    buf[0] = fv[m] * std::conj(gv[m]);
    for (std::size_t k = 1; k <= reach; ++k) {
      buf[k] = fv[m + k] * std::conj(gv[m - k]);
      buf[big - k] = fv[m - k] * std::conj(gv[m + k]);
    }
  });
  return out;
}

PhaseSpaceField wigner(const Signal& f, const TransformOptions& opt) {
  return cross_wigner(f, f, opt);
}

PhaseSpaceField tau_wigner(const Signal& f, const Signal& g, double tau,
                           const TransformOptions& opt) {
  require_same_grid(f, g);
  require_tau(tau);
  const Grid1D sg = f.grid();
  const std::size_t n = sg.n;
  const bool same = std::equal(f.values().begin(), f.values().end(), g.values().begin());
  auto out = make_field(PhaseGrid::wigner(sg, opt.xi_oversample, opt.window),
                        FieldKind::TauWigner, tau, same && tau == 0.5);
  const PhaseGrid& pg = out.grid;

  // Lag y_j = 2 j dt, j in [-n/2, n/2). Row j of the lag table holds
  // f(t_m + tau y_j) conj(g(t_m - (1 - tau) y_j)) for the stored rows m.
  const Translator tf(f);
  const Translator tg(g);
  std::vector<cplx> table(pg.rows * n);
  const double last = static_cast<double>(n - 1);
  parallel_for_ranges(0, n, [&](std::size_t lo, std::size_t hi) {
    std::vector<cplx> fs(n), gs(n);
    for (std::size_t jj = lo; jj < hi; ++jj) {
      const long j = static_cast<long>(jj) - static_cast<long>(n / 2);
      const double jd = static_cast<double>(j);
      const double shift = 2.0 * tau * jd * sg.dt;
      tf.apply(-shift, fs);
      if (same)
        gs = fs;
      else
        tg.apply(-shift, gs);
      for (std::size_t i = 0; i < pg.rows; ++i) {
        const std::size_t m = pg.row0 + i;
        const double md = static_cast<double>(m);
        const double fpos = md + 2.0 * tau * jd;
        const double gpos = md - 2.0 * (1.0 - tau) * jd;
        if (fpos < 0.0 || fpos > last || gpos < 0.0 || gpos > last) continue;
        const long gi = (static_cast<long>(m) - 2 * j) % static_cast<long>(n);
        const std::size_t gidx = static_cast<std::size_t>(gi < 0 ? gi + static_cast<long>(n) : gi);
        table[i * n + jj] = fs[m] * std::conj(gs[gidx]);
      }
    }
  });

  const std::size_t big = pg.xigrid.n;
  lag_fft_rows(out, sg, [&](std::size_t m, std::vector<cplx>& buf) {
    const cplx* row = table.data() + (m - pg.row0) * n;
    for (std::size_t jj = 0; jj < n; ++jj) {
      const long j = static_cast<long>(jj) - static_cast<long>(n / 2);
      buf[static_cast<std::size_t>(j < 0 ? j + static_cast<long>(big) : j)] = row[jj];
    }
  });
  return out;
}

PhaseSpaceField ambiguity(const Signal& f, const Signal& g, const std::optional<Window>& window) {
  require_same_grid(f, g);
  const Grid1D sg = f.grid();
  const std::size_t n = sg.n;
  auto out = make_field(PhaseGrid::ambiguity(sg, window), FieldKind::Ambiguity, 0.5, false);
  const PhaseGrid& pg = out.grid;
  parallel_for_ranges(0, pg.rows, [&](std::size_t lo, std::size_t hi) {
    std::vector<cplx> prod(n);
    for (std::size_t i = lo; i < hi; ++i) {
      const long l = static_cast<long>(pg.row0 + i) - static_cast<long>(n / 2);
      for (std::size_t m = 0; m < n; ++m) {
        const long a = static_cast<long>(m) + l;
        const long b = static_cast<long>(m) - l;
        prod[m] = (a >= 0 && a < static_cast<long>(n) && b >= 0 && b < static_cast<long>(n))
                      ? f[static_cast<std::size_t>(a)] * std::conj(g[static_cast<std::size_t>(b)])
                      : cplx{};
      }
      const Signal spec = dft(Signal(sg, prod));
      for (std::size_t j = 0; j < pg.bins; ++j) out.at(i, j) = spec[pg.bin0 + j];
    }
  });
  return out;
}

namespace {

PhaseSpaceField born_jordan_fixed(const Signal& f, const Signal& g, std::size_t nodes,
                                  const TransformOptions& opt) {
  const QuadRule rule = composite_gauss_legendre(0.0, 1.0, nodes / 8);
  PhaseSpaceField acc;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double u = rule.nodes[q];
    const double tau = 0.5 * (1.0 - std::cos(std::numbers::pi * u));
    const double w = rule.weights[q] * 0.5 * std::numbers::pi * std::sin(std::numbers::pi * u);
    PhaseSpaceField wt = tau_wigner(f, g, tau, opt);
    if (q == 0) {
      acc = std::move(wt);
      for (auto& v : acc.values) v *= w;
    } else {
      for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += w * wt.values[i];
    }
  }
  acc.kind = FieldKind::BornJordan;
  acc.tau = 0.5;
  acc.real = std::equal(f.values().begin(), f.values().end(), g.values().begin());
  return acc;
}

}  // namespace

PhaseSpaceField born_jordan(const Signal& f, const Signal& g, const QuadSpec& quad,
                            const TransformOptions& opt) {
  require_same_grid(f, g);
  if (quad.nodes < 8 || quad.nodes % 8 != 0)
    throw InvalidArgument("Born-Jordan node count must be a positive multiple of 8");
  if (!(quad.tol > 0.0)) throw InvalidArgument("Born-Jordan tolerance must be positive");
  PhaseSpaceField coarse = born_jordan_fixed(f, g, quad.nodes, opt);
  for (std::size_t nodes = 2 * quad.nodes; nodes <= quad.max_nodes; nodes *= 2) {
    PhaseSpaceField fine = born_jordan_fixed(f, g, nodes, opt);
    double diff = 0.0;
    for (std::size_t i = 0; i < fine.values.size(); ++i)
      diff = std::max(diff, std::abs(fine.values[i] - coarse.values[i]));
    const double scale = fine.max_abs();
    if (diff <= quad.tol * scale || scale == 0.0) return fine;
    coarse = std::move(fine);
  }
  throw ConvergenceError("Born-Jordan tau quadrature did not converge within max_nodes");
}

PhasePoint covariance_center(PhasePoint a, PhasePoint b, double tau) {
  // Written as a + tau (b - a) per axis so that equal points map to themselves exactly.
  return {a.x + tau * (b.x - a.x), b.xi + tau * (a.xi - b.xi)};
}

}  // namespace psl
