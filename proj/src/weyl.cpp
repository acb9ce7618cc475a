#include "psl/weyl.hpp"

#include <algorithm>
#include <cmath>

#include "psl/error.hpp"
#include "psl/parallel.hpp"

namespace psl {

WeylOperator::WeylOperator(const PhaseGrid& grid, const std::vector<double>& symbol)
    : grid_(grid), lag_symbol_(grid.rows) {
  if (symbol.size() != grid.size()) throw GridMismatch("symbol size does not match its grid");
  const std::size_t n = grid.xgrid.n;
  const std::size_t big = grid.xigrid.n;
  const double product = grid.xigrid.dt * 2.0 * static_cast<double>(big) * grid.xgrid.dt;
  if (big % n != 0 || std::abs(product - 1.0) > 1e-12)
    throw GridMismatch("Weyl symbols must live on a lag-doubled Wigner grid");
  parallel_for_ranges(0, grid.rows, [&](std::size_t lo, std::size_t hi) {
    std::vector<cplx> buf(big);
    for (std::size_t i = lo; i < hi; ++i) {
      std::fill(buf.begin(), buf.end(), cplx{});
      for (std::size_t j = 0; j < grid.bins; ++j) buf[grid.bin0 + j] = symbol[i * grid.bins + j];
      fft_forward(buf);
      const std::size_t m = grid.row0 + i;
      const std::size_t reach = std::min(m, n - 1 - m);
      auto& row = lag_symbol_[i];
      row.resize(2 * reach + 1);
      // A_m[n'] = sum_k a_k e^{-2 pi i (k - N/2) n' / N} = (-1)^{n'} FFT(a)[n' mod N].
      for (std::size_t k = 0; k <= reach; ++k) {
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        row[reach + k] = std::conj(sign * buf[k]);
        row[reach - k] = std::conj(sign * buf[(big - k) % big]);
      }
    }
  });
}

Signal WeylOperator::apply(const Signal& f) const {
  if (!(f.grid() == grid_.xgrid)) throw GridMismatch("signal does not match the operator grid");
  const std::size_t n = f.size();
  const double factor = 2.0 * grid_.cell_area();
  const auto fv = f.values();
  std::vector<cplx> h(n);
  // h_p = 2 cell_area sum_m conj(A_m[p - m]) f_{2m - p}. Each output sample
  // is summed over rows in a fixed order, independent of the thread count.
  parallel_for_ranges(0, n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      cplx acc{};
      for (std::size_t i = 0; i < grid_.rows; ++i) {
        const long m = static_cast<long>(grid_.row0 + i);
        const auto& row = lag_symbol_[i];
        const long reach = static_cast<long>(row.size() - 1) / 2;
        const long lag = static_cast<long>(p) - m;
        if (lag < -reach || lag > reach) continue;
        acc += row[static_cast<std::size_t>(reach + lag)] * fv[static_cast<std::size_t>(m - lag)];
      }
      h[p] = factor * acc;
    }
  });
  return Signal(f.grid(), std::move(h));
}

Signal wigner_adjoint(const PhaseSpaceField& a, const Signal& f) {
  std::vector<double> symbol(a.values.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) symbol[i] = a.values[i].real();
  return WeylOperator(a.grid, symbol).apply(f);
}

}  // namespace psl
