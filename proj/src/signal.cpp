#include "psl/signal.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <random>

#include "psl/error.hpp"
#include "psl/parallel.hpp"

namespace psl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const Signal& f, const Signal& g) {
  if (!(f.grid() == g.grid())) throw GridMismatch("signals live on different grids");
}

// e^{i k theta} for k = 0..count-1, by recurrence with periodic resync.
void phase_ladder(double theta, std::size_t count, cplx* out) {
  const cplx step = std::polar(1.0, theta);
  cplx w = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    if (k % 32 == 0) w = std::polar(1.0, theta * static_cast<double>(k));
    out[k] = w;
    w *= step;
  }
}

// Signed frequency index of FFT bin k (Nyquist bin reported as -n/2).
inline long signed_bin(std::size_t k, std::size_t n) {
  return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

}  // namespace

Grid1D Grid1D::make(std::size_t n, double dt) {
  if (!is_pow2(n) || n < 4) throw InvalidArgument("grid size must be a power of two >= 4");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("grid spacing must be positive");
  return Grid1D{n, dt};
}

Signal::Signal(Grid1D grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n) throw InvalidArgument("signal length does not match grid");
}

Signal Signal::zeros(Grid1D grid) { return Signal(grid, std::vector<cplx>(grid.n)); }

double Signal::energy() const {
  std::vector<double> sq(values_.size());
  for (std::size_t m = 0; m < values_.size(); ++m) sq[m] = std::norm(values_[m]);
  return grid_.dt * pairwise_sum(sq.data(), sq.size());
}

Signal Signal::scaled(cplx factor) const {
  std::vector<cplx> v(values_);
  for (auto& x : v) x *= factor;
  return Signal(grid_, std::move(v));
}

Signal Signal::axpy(cplx factor, const Signal& other) const {
  require_same_grid(*this, other);
  std::vector<cplx> v(values_);
  for (std::size_t m = 0; m < v.size(); ++m) v[m] += factor * other.values_[m];
  return Signal(grid_, std::move(v));
}

cplx inner(const Signal& f, const Signal& g) {
  require_same_grid(f, g);
  const std::size_t n = f.size();
  std::vector<double> re(n), im(n);
  for (std::size_t m = 0; m < n; ++m) {
    const cplx p = f[m] * std::conj(g[m]);
    re[m] = p.real();
    im[m] = p.imag();
  }
  const double dt = f.grid().dt;
  return {dt * pairwise_sum(re.data(), n), dt * pairwise_sum(im.data(), n)};
}

double energy(const Signal& f) { return f.energy(); }

Signal normalized(const Signal& f) {
  const double nrm = f.norm();
  if (!(nrm > 0.0)) throw InvalidArgument("cannot normalize the zero signal");
  return f.scaled(1.0 / nrm);
}

Translator::Translator(const Signal& f)
    : grid_(f.grid()), samples_(f.values().begin(), f.values().end()), spectrum_(samples_) {
  fft_forward(spectrum_);
  const double inv_n = 1.0 / static_cast<double>(grid_.n);
  for (auto& c : spectrum_) c *= inv_n;
}

void Translator::apply(double x, std::span<cplx> out) const {
  const std::size_t n = grid_.n;
  if (out.size() != n) throw InvalidArgument("translation buffer has the wrong length");
  const double samples = x / grid_.dt;
  if (samples == std::nearbyint(samples) && std::abs(samples) < 1e15) {
    const long k = static_cast<long>(samples) % static_cast<long>(n);
    const std::size_t shift = static_cast<std::size_t>(k < 0 ? k + static_cast<long>(n) : k);
    for (std::size_t m = 0; m < n; ++m) out[(m + shift) % n] = samples_[m];
    return;
  }
  // Bin kappa acquires e^{-2 pi i kappa x / L}; the Nyquist bin gets the real
  // average of its two aliases so real inputs stay real.
  std::vector<cplx> ladder(n / 2 + 1);
  phase_ladder(-kTwoPi * x / grid_.length(), n / 2 + 1, ladder.data());
  for (std::size_t k = 0; k < n; ++k) {
    const long s = signed_bin(k, n);
    cplx w;
    if (k == n / 2)
      w = ladder[n / 2].real();
    else
      w = s >= 0 ? ladder[static_cast<std::size_t>(s)]
                 : std::conj(ladder[static_cast<std::size_t>(-s)]);
    out[k] = spectrum_[k] * w;
  }
  fft_inverse(out);
}

Signal translate(const Signal& f, double x) {
  if (x == 0.0) return f;
  std::vector<cplx> v(f.size());
  Translator(f).apply(x, v);
  return Signal(f.grid(), std::move(v));
}

Signal modulate(const Signal& f, double xi) {
  if (xi == 0.0) return f;
  std::vector<cplx> v(f.values().begin(), f.values().end());
  for (std::size_t m = 0; m < v.size(); ++m) v[m] *= std::polar(1.0, kTwoPi * xi * f.coord(m));
  return Signal(f.grid(), std::move(v));
}

Signal tf_shift(const Signal& f, PhasePoint z) { return modulate(translate(f, z.x), z.xi); }

Signal dilate(const Signal& f, double a) {
  if (a == 0.0 || !std::isfinite(a)) throw InvalidArgument("dilation factor must be nonzero");
  if (a == 1.0) return f;
  const Grid1D grid = f.grid();
  const std::size_t n = grid.n;
  std::vector<cplx> coef(f.values().begin(), f.values().end());
  fft_forward(coef);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& c : coef) c *= inv_n;

  const double lo = grid.coord(0);
  const double hi = grid.coord(n - 1);
  const double scale = std::sqrt(std::abs(a));
  std::vector<cplx> out(n);
  parallel_for_ranges(0, n, [&](std::size_t b, std::size_t e) {
    std::vector<cplx> ladder(n / 2 + 1);
    for (std::size_t m = b; m < e; ++m) {
      const double t = a * grid.coord(m);
      if (t < lo || t > hi) continue;
      const double u = (t - lo) / grid.dt;  // fractional sample index
      phase_ladder(kTwoPi * u / static_cast<double>(n), n / 2 + 1, ladder.data());
      cplx acc = coef[0];
      for (std::size_t k = 1; k < n / 2; ++k)
        acc += coef[k] * ladder[k] + coef[n - k] * std::conj(ladder[k]);
      acc += coef[n / 2] * ladder[n / 2].real();
      out[m] = scale * acc;
    }
  });
  return Signal(grid, std::move(out));
}

Signal reflect(const Signal& f) {
  const std::size_t n = f.size();
  std::vector<cplx> v(n);
  for (std::size_t m = 0; m < n; ++m) v[m] = f[(n - m) % n];
  return Signal(f.grid(), std::move(v));
}

Signal dft(const Signal& f) {
  // With t_m = (m - n/2) dt and nu_k = (k - n/2) dnu, the centered kernel
  // factors as (-1)^{k + m + n/2} e^{-2 pi i k m / n}.
  const std::size_t n = f.size();
  std::vector<cplx> v(f.values().begin(), f.values().end());
  for (std::size_t m = 1; m < n; m += 2) v[m] = -v[m];
  fft_forward(v);
  const double sign_half = (n / 2) % 2 == 0 ? 1.0 : -1.0;
  const double dt = f.grid().dt;
  for (std::size_t k = 0; k < n; ++k) v[k] *= (k % 2 == 0 ? dt : -dt) * sign_half;
  return Signal(f.grid().dual(), std::move(v));
}

Signal idft(const Signal& spectrum, Grid1D time_grid) {
  if (!(spectrum.grid() == time_grid.dual()))
    throw GridMismatch("spectrum does not live on the dual of the time grid");
  const std::size_t n = spectrum.size();
  std::vector<cplx> v(spectrum.values().begin(), spectrum.values().end());
  for (std::size_t k = 1; k < n; k += 2) v[k] = -v[k];
  fft_inverse(v);
  const double sign_half = (n / 2) % 2 == 0 ? 1.0 : -1.0;
  const double dnu = spectrum.grid().dt;
  for (std::size_t m = 0; m < n; ++m) v[m] *= (m % 2 == 0 ? dnu : -dnu) * sign_half;
  return Signal(time_grid, std::move(v));
}

Signal band_limit(const Signal& f, double band) {
  const std::size_t n = f.size();
  std::vector<cplx> v(f.values().begin(), f.values().end());
  fft_forward(v);
  const double dnu = f.grid().dual_spacing();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long s = signed_bin(k, n);
    v[k] = std::abs(static_cast<double>(s) * dnu) < band ? v[k] * inv_n : cplx{};
  }
  fft_inverse(v);
  return Signal(f.grid(), std::move(v));
}

Signal half_band_project(const Signal& f) { return band_limit(f, f.grid().half_band()); }

Signal random_signal(std::uint64_t seed, double band, Grid1D grid) {
  if (!(band > 0.0) || band >= grid.nyquist())
    throw InvalidArgument("random_signal band must lie in (0, nyquist)");
  // mt19937_64 output is fixed by the standard; the uniform-to-normal step
  // is done by hand so results do not depend on the library's distributions.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  const std::size_t n = grid.n;
  const double dnu = grid.dual_spacing();
  std::vector<cplx> coef(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = kTwoPi * uniform();
    const long s = signed_bin(k, n);
    if (std::abs(static_cast<double>(s) * dnu) < band) coef[k] = std::polar(r, phi);
  }
  fft_inverse(coef);
  return normalized(Signal(grid, std::move(coef)));
}

Signal gaussian(Grid1D grid, PhasePoint center, double width) {
  if (!(width > 0.0)) throw InvalidArgument("gaussian width must be positive");
  std::vector<cplx> v(grid.n);
  for (std::size_t m = 0; m < grid.n; ++m) {
    const double t = grid.coord(m);
    const double u = (t - center.x) / width;
    v[m] = std::polar(std::exp(-std::numbers::pi * u * u), kTwoPi * center.xi * t);
  }
  return Signal(grid, std::move(v));
}

Signal hermite(Grid1D grid, int k) {
  if (k < 0) throw InvalidArgument("hermite order must be >= 0");
  // phi_j(u) orthonormal in du, u = sqrt(2 pi) t; psi_j(t) = (2 pi)^{1/4} phi_j(u).
  const double c = std::sqrt(kTwoPi);
  const double norm = std::pow(kTwoPi, 0.25) * std::pow(std::numbers::pi, -0.25);
  std::vector<cplx> v(grid.n);
  for (std::size_t m = 0; m < grid.n; ++m) {
    const double u = c * grid.coord(m);
    double prev = 0.0;
    double cur = norm * std::exp(-0.5 * u * u);
    for (int j = 0; j < k; ++j) {
      const double next = std::sqrt(2.0 / (j + 1)) * u * cur - std::sqrt(double(j) / (j + 1)) * prev;
      prev = cur;
      cur = next;
    }
    v[m] = cur;
  }
  return Signal(grid, std::move(v));
}

double tail_energy_fraction(const Signal& f, std::size_t margin) {
  const std::size_t n = f.size();
  margin = std::min(margin, n / 2);
  double tail = 0.0, total = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double e = std::norm(f[m]);
    total += e;
    if (m < margin || m >= n - margin) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

bool guard_ok(const Signal& f, double guard_fraction) {
  return tail_energy_fraction(f, f.size() / 16) <= guard_fraction;
}

bool check_guard(const Signal& f, const char* context, double guard_fraction) {
  const double frac = tail_energy_fraction(f, f.size() / 16);
  if (frac <= guard_fraction) return true;
  std::fprintf(stderr, "warning: %s: edge energy fraction %.3e exceeds guard %.1e\n", context,
               frac, guard_fraction);
  return false;
}

}  // namespace psl
