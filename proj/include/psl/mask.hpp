#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "psl/phase_grid.hpp"

namespace psl {

/// Cell-aligned subset of a phase grid. A cell belongs to the mask when its
/// center (the sample point) lies in the continuum region.
class DomainMask {
 public:
  /// cells[i * bins + j] != 0 marks stored cell (i, j). Requires
  /// 0 < measure < grid.total_area().
  DomainMask(PhaseGrid grid, std::vector<std::uint8_t> cells);

  static DomainMask rectangle(const PhaseGrid& grid, double x_min, double x_max, double xi_min,
                              double xi_max);
  static DomainMask disk(const PhaseGrid& grid, PhasePoint center, double radius);
  static DomainMask annulus(const PhaseGrid& grid, PhasePoint center, double inner_radius,
                            double outer_radius);
  /// Every stored cell except the first one; the closest admissible mask to
  /// the whole grid.
  static DomainMask almost_full(const PhaseGrid& grid);

  const PhaseGrid& grid() const { return grid_; }
  bool contains(std::size_t i, std::size_t j) const { return cells_[i * grid_.bins + j] != 0; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }
  std::size_t count() const { return count_; }
  double measure() const { return static_cast<double>(count_) * grid_.cell_area(); }
  PhasePoint centroid() const;
  /// Member cells in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> members() const;

  /// Mask moved by c, rounded to whole cells. Throws GuardViolation when a
  /// member cell would leave the stored grid.
  DomainMask translated(PhasePoint c) const;

  friend DomainMask unite(const DomainMask& a, const DomainMask& b);
  friend bool operator==(const DomainMask& a, const DomainMask& b) {
    return a.grid_ == b.grid_ && a.cells_ == b.cells_;
  }

 private:
  PhaseGrid grid_;
  std::vector<std::uint8_t> cells_;
  std::size_t count_ = 0;
};

/// PBM (P1) bitmap with one text row per x row, plus a JSON sidecar at
/// `path + ".json"` holding the grid and the measure.
void write_mask(const DomainMask& mask, const std::string& path);
DomainMask read_mask(const std::string& path);

}  // namespace psl
