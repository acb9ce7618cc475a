#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psl/signal.hpp"

namespace psl {

/// Rectangular region of the (x, xi) plane; transforms only store the
/// rows and bins whose coordinates fall inside it.
struct Window {
  double x_min, x_max, xi_min, xi_max;

  static Window centered(double x_half, double xi_half) {
    return {-x_half, x_half, -xi_half, xi_half};
  }
};

/// Two centered axes plus the stored sub-rectangle [row0, row0 + rows) x
/// [bin0, bin0 + bins). Values are laid out row-major (x outer, xi inner).
struct PhaseGrid {
  Grid1D xgrid;
  Grid1D xigrid;
  std::size_t row0 = 0, rows = 0;
  std::size_t bin0 = 0, bins = 0;

  /// Lag-doubled Wigner grid: x on the signal grid, xi with spacing
  /// 1/(2 * q * n * dt) over q * n bins.
  static PhaseGrid wigner(Grid1D signal, std::size_t xi_oversample = 1,
                          const std::optional<Window>& window = std::nullopt);
  /// Ambiguity grid: lag x with spacing 2 dt, xi on the dual signal grid.
  static PhaseGrid ambiguity(Grid1D signal, const std::optional<Window>& window = std::nullopt);

  double cell_area() const { return xgrid.dt * xigrid.dt; }
  double x(std::size_t i) const { return xgrid.coord(row0 + i); }
  double xi(std::size_t j) const { return xigrid.coord(bin0 + j); }
  std::size_t size() const { return rows * bins; }
  double total_area() const { return cell_area() * static_cast<double>(size()); }
  bool is_full() const { return rows == xgrid.n && bins == xigrid.n; }
  /// Local (row, bin) of the stored cell nearest to z, clamped to the window.
  std::pair<std::size_t, std::size_t> nearest(PhasePoint z) const;

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

enum class FieldKind { Wigner, CrossWigner, TauWigner, Ambiguity, BornJordan };

std::string to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& name);

struct PhaseSpaceField {
  PhaseGrid grid;
  FieldKind kind = FieldKind::Wigner;
  double tau = 0.5;
  /// True for auto-terms whose exact values are real.
  bool real = false;
  std::vector<cplx> values;

  cplx at(std::size_t i, std::size_t j) const { return values[i * grid.bins + j]; }
  cplx& at(std::size_t i, std::size_t j) { return values[i * grid.bins + j]; }
  double max_abs() const;
  double max_imag() const;
};

}  // namespace psl
