#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "psl/fft.hpp"

namespace psl {

/// Centered uniform grid: sample m sits at t_m = (m - n/2) * dt.
struct Grid1D {
  std::size_t n = 0;
  double dt = 0.0;

  /// Validating constructor: n must be a power of two (>= 4) and dt > 0.
  static Grid1D make(std::size_t n, double dt);

  double coord(std::size_t m) const {
    return (static_cast<double>(m) - static_cast<double>(n / 2)) * dt;
  }
  double length() const { return static_cast<double>(n) * dt; }
  double dual_spacing() const { return 1.0 / length(); }
  /// Frequency grid of the centered DFT.
  Grid1D dual() const { return Grid1D{n, dual_spacing()}; }
  double nyquist() const { return 0.5 / dt; }
  /// Largest frequency a signal may carry for the lag-doubled Wigner
  /// transform to be alias-free.
  double half_band() const { return 0.25 / dt; }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

/// Phase-space point z = (x, xi).
struct PhasePoint {
  double x = 0.0;
  double xi = 0.0;

  friend PhasePoint operator+(PhasePoint a, PhasePoint b) { return {a.x + b.x, a.xi + b.xi}; }
  friend PhasePoint operator-(PhasePoint a, PhasePoint b) { return {a.x - b.x, a.xi - b.xi}; }
  friend PhasePoint operator-(PhasePoint a) { return {-a.x, -a.xi}; }
  friend PhasePoint operator*(double s, PhasePoint a) { return {s * a.x, s * a.xi}; }
  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
  double norm() const { return std::hypot(x, xi); }
};

/// Complex samples of a function on a Grid1D. Immutable once built.
class Signal {
 public:
  Signal() = default;
  Signal(Grid1D grid, std::vector<cplx> values);

  static Signal zeros(Grid1D grid);

  template <class Fn>
  static Signal sample(Grid1D grid, Fn&& fn) {
    std::vector<cplx> v(grid.n);
    for (std::size_t m = 0; m < grid.n; ++m) v[m] = cplx(fn(grid.coord(m)));
    return Signal(grid, std::move(v));
  }

  const Grid1D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const cplx> values() const { return values_; }
  cplx operator[](std::size_t m) const { return values_[m]; }
  double coord(std::size_t m) const { return grid_.coord(m); }

  /// dt * sum |f_m|^2.
  double energy() const;
  double norm() const { return std::sqrt(energy()); }

  Signal scaled(cplx factor) const;
  /// this + factor * other.
  Signal axpy(cplx factor, const Signal& other) const;

  friend Signal operator+(const Signal& a, const Signal& b) { return a.axpy(1.0, b); }
  friend Signal operator-(const Signal& a, const Signal& b) { return a.axpy(-1.0, b); }

 private:
  Grid1D grid_{};
  std::vector<cplx> values_;
};

/// <f, g> = dt * sum f_m conj(g_m); conjugate-linear in the second slot.
cplx inner(const Signal& f, const Signal& g);
double energy(const Signal& f);
Signal normalized(const Signal& f);

/// Repeated band-limited translations of one signal; the spectrum is
/// computed once. Shifts by whole samples are applied as circular index
/// shifts, which coincide with the band-limited shift.
class Translator {
 public:
  explicit Translator(const Signal& f);
  /// out[m] = f(t_m - x); out.size() must equal n.
  void apply(double x, std::span<cplx> out) const;

 private:
  Grid1D grid_;
  std::vector<cplx> samples_;
  std::vector<cplx> spectrum_;  // FFT / n
};

/// f(t - x), band-limited (frequency-domain) fractional translation.
Signal translate(const Signal& f, double x);
/// e^{2 pi i xi t} f(t), pointwise.
Signal modulate(const Signal& f, double xi);
/// pi(z) f(t) = e^{2 pi i xi t} f(t - x): translation first, then modulation.
Signal tf_shift(const Signal& f, PhasePoint z);
/// |a|^{1/2} f(a t) by band-limited interpolation; zero where a t leaves the grid.
Signal dilate(const Signal& f, double a);
/// f(-t) (periodic image for the unpaired edge sample).
Signal reflect(const Signal& f);

/// Centered unitary DFT approximating the continuous Fourier transform;
/// the result lives on grid.dual().
Signal dft(const Signal& f);
/// Inverse of dft(); `spectrum` must live on the dual of `time_grid`.
Signal idft(const Signal& spectrum, Grid1D time_grid);

/// Removes every DFT component with |nu| >= band.
Signal band_limit(const Signal& f, double band);
/// band_limit at grid.half_band(): the subspace on which the discrete
/// Wigner transform is alias-free.
Signal half_band_project(const Signal& f);

/// Seeded unit-energy signal whose DFT is supported on |nu| < band.
Signal random_signal(std::uint64_t seed, double band, Grid1D grid);

/// e^{-pi ((t - x)/width)^2} e^{2 pi i xi t}, i.e. pi(center) applied to a
/// centered Gaussian of the given width. Not normalized.
Signal gaussian(Grid1D grid, PhasePoint center = {}, double width = 1.0);
/// L2-normalized Hermite function of order k in the e^{-pi t^2} convention.
Signal hermite(Grid1D grid, int k);

/// Fraction of energy carried by the outer `margin` samples at each edge.
double tail_energy_fraction(const Signal& f, std::size_t margin);
/// Default guard: outer n/16 samples carry at most `guard_fraction` of the energy.
bool guard_ok(const Signal& f, double guard_fraction = 1e-12);
/// Emits a warning on stderr when guard_ok fails; returns guard_ok.
bool check_guard(const Signal& f, const char* context, double guard_fraction = 1e-12);

}  // namespace psl
