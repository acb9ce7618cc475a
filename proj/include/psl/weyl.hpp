#pragma once

#include <vector>

#include "psl/phase_grid.hpp"
#include "psl/signal.hpp"

namespace psl {

/// Weyl quantization of a real symbol sampled on a lag-doubled Wigner grid,
/// defined by <T f, g> = cell_area * sum a * W(f, g). Cells outside the
/// stored window count as a = 0. With a = 1 on the full grid T is the identity.
class WeylOperator {
 public:
  WeylOperator(const PhaseGrid& grid, const std::vector<double>& symbol);

  Signal apply(const Signal& f) const;
  const PhaseGrid& grid() const { return grid_; }

 private:
  PhaseGrid grid_;
  // Per stored row: conj of the lag-domain symbol for n' in [-reach, reach].
  std::vector<std::vector<cplx>> lag_symbol_;
};

/// T_a f for the real part of `a`; half the gradient of
/// f -> cell_area * sum a * Wf with respect to (Re f, Im f).
Signal wigner_adjoint(const PhaseSpaceField& a, const Signal& f);

}  // namespace psl
