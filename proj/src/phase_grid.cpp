#include "psl/phase_grid.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "psl/error.hpp"

namespace psl {

namespace {

// Contiguous index range of a centered axis whose coordinates lie in [lo, hi].
std::pair<std::size_t, std::size_t> axis_range(const Grid1D& axis, double lo, double hi) {
  std::size_t first = axis.n, last = 0;
  for (std::size_t i = 0; i < axis.n; ++i) {
    const double c = axis.coord(i);
    if (c >= lo && c <= hi) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == axis.n) throw InvalidArgument("window does not intersect the grid");
  return {first, last - first + 1};
}

PhaseGrid apply_window(PhaseGrid g, const std::optional<Window>& window) {
  if (!window) {
    g.rows = g.xgrid.n;
    g.bins = g.xigrid.n;
    return g;
  }
  if (!(window->x_min <= window->x_max) || !(window->xi_min <= window->xi_max))
    throw InvalidArgument("window bounds are inverted");
  std::tie(g.row0, g.rows) = axis_range(g.xgrid, window->x_min, window->x_max);
  std::tie(g.bin0, g.bins) = axis_range(g.xigrid, window->xi_min, window->xi_max);
  return g;
}

}  // namespace

PhaseGrid PhaseGrid::wigner(Grid1D signal, std::size_t xi_oversample,
                            const std::optional<Window>& window) {
  if (xi_oversample == 0) throw InvalidArgument("xi oversampling must be >= 1");
  const std::size_t bins = xi_oversample * signal.n;
  PhaseGrid g;
  g.xgrid = signal;
  g.xigrid = Grid1D{bins, 1.0 / (2.0 * static_cast<double>(bins) * signal.dt)};
  return apply_window(g, window);
}

PhaseGrid PhaseGrid::ambiguity(Grid1D signal, const std::optional<Window>& window) {
  PhaseGrid g;
  g.xgrid = Grid1D{signal.n, 2.0 * signal.dt};
  g.xigrid = signal.dual();
  return apply_window(g, window);
}

std::pair<std::size_t, std::size_t> PhaseGrid::nearest(PhasePoint z) const {
  auto pick = [](const Grid1D& axis, std::size_t first, std::size_t count, double c) {
    const double idx = std::round(c / axis.dt + static_cast<double>(axis.n / 2));
    const double lo = static_cast<double>(first);
    const double hi = static_cast<double>(first + count - 1);
    return static_cast<std::size_t>(std::clamp(idx, lo, hi)) - first;
  };
  return {pick(xgrid, row0, rows, z.x), pick(xigrid, bin0, bins, z.xi)};
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Wigner: return "wigner";
    case FieldKind::CrossWigner: return "cross-wigner";
    case FieldKind::TauWigner: return "tau-wigner";
    case FieldKind::Ambiguity: return "ambiguity";
    case FieldKind::BornJordan: return "born-jordan";
  }
  return "unknown";
}

FieldKind field_kind_from_string(const std::string& name) {
  for (auto k : {FieldKind::Wigner, FieldKind::CrossWigner, FieldKind::TauWigner,
                 FieldKind::Ambiguity, FieldKind::BornJordan})
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown field kind '" + name + "'");
}

double PhaseSpaceField::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double PhaseSpaceField::max_imag() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

}  // namespace psl
