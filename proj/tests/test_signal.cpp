#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "psl/error.hpp"
#include "psl/signal.hpp"

using namespace psl;

namespace {

double max_diff(const Signal& a, const Signal& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const Signal& a) {
  double m = 0.0;
  for (auto v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

Signal interior_packet(Grid1D g, std::uint64_t seed) {
  // Band-limited random signal under a Gaussian envelope, re-projected.
  const Signal r = random_signal(seed, 0.25 * g.nyquist(), g);
  const Signal env = gaussian(g, {}, 2.0);
  std::vector<cplx> v(g.n);
  for (std::size_t m = 0; m < g.n; ++m) v[m] = r[m] * env[m];
  return normalized(band_limit(Signal(g, v), 0.5 * g.nyquist()));
}

}  // namespace

TEST_CASE("grid validation and dual spacing") {
  CHECK_THROWS_AS(Grid1D::make(500, 0.1), InvalidArgument);
  CHECK_THROWS_AS(Grid1D::make(512, 0.0), InvalidArgument);
  const Grid1D g = Grid1D::make(512, 1.0 / 16);
  CHECK(g.coord(256) == 0.0);
  CHECK(g.coord(0) == -16.0);
  CHECK(g.dual().dt == doctest::Approx(1.0 / 32).epsilon(1e-15));
}

TEST_CASE("inner product examples") {
  const Grid1D g = Grid1D::make(512, 1.0 / 32);
  const Signal f = gaussian(g);
  const Signal u = normalized(f);
  CHECK(std::abs(inner(u, u) - cplx(1.0)) < 1e-14);

  const double ref = oracle::integrate_line([](double t) { return std::exp(-2 * oracle::pi * t * t); });
  CHECK(std::abs(inner(f, f).real() - ref) < 1e-12);
  CHECK(std::abs(ref - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(inner(f, f).imag() == 0.0);

  const Signal h0 = hermite(g, 0), h1 = hermite(g, 1);
  CHECK(std::abs(inner(h0, h1)) < 1e-10);
  CHECK(std::abs(inner(h1, h1).real() - 1.0) < 1e-10);
  CHECK(std::abs(inner(hermite(g, 2), hermite(g, 4))) < 1e-10);

  CHECK_THROWS_AS(inner(f, gaussian(Grid1D::make(256, 1.0 / 32))), GridMismatch);
  CHECK(energy(Signal::zeros(g)) == 0.0);
}

TEST_CASE("tf_shift examples") {
  const Grid1D g = Grid1D::make(512, 1.0 / 16);
  const Signal f = gaussian(g, {0.3, 0.7}, 1.3);
  CHECK(max_diff(tf_shift(f, {0, 0}), f) == 0.0);

  const Signal s = tf_shift(f, {5 * g.dt, 0});
  for (std::size_t m = 5; m < g.n; ++m) CHECK(s[m] == f[m - 5]);

  const double xi0 = 1.75;
  const Signal mod = tf_shift(f, {0, xi0});
  double worst = 0.0;
  for (std::size_t m = 0; m < g.n; ++m)
    worst = std::max(worst, std::abs(mod[m] - f[m] * std::polar(1.0, 2 * oracle::pi * xi0 * g.coord(m))));
  CHECK(worst == 0.0);

  // Fractional shift matches the closed form of the shifted Gaussian.
  const Signal frac = translate(gaussian(g), 0.37);
  const Signal expect = gaussian(g, {0.37, 0});
  CHECK(max_diff(frac, expect) < 1e-12);
}

TEST_CASE("tf_shift composition follows translate-then-modulate") {
  const Grid1D g = Grid1D::make(256, 1.0 / 8);
  const Signal f = interior_packet(g, 3);
  const PhasePoint z{0.41, -1.3};
  const Signal a = tf_shift(tf_shift(f, {z.x, 0}), {0, z.xi});
  CHECK(max_diff(a, tf_shift(f, z)) == 0.0);
}

TEST_CASE("tf_shift preserves energy of band-limited interior signals") {
  const Grid1D g = Grid1D::make(512, 1.0 / 16);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Signal f = interior_packet(g, seed);
    const double x = 0.1 * static_cast<double>(seed) - 1.03;
    const double xi = 0.37 * static_cast<double>(seed) - 3.1;
    CHECK(std::abs(tf_shift(f, {x, xi}).energy() - f.energy()) <= 1e-10 * f.energy());
  }
}

TEST_CASE("dilate examples") {
  const Grid1D g = Grid1D::make(512, 1.0 / 32);
  const Signal f = gaussian(g);
  CHECK(max_diff(dilate(f, 1.0), f) == 0.0);
  CHECK(max_diff(dilate(f, -1.0), f) < 1e-10);
  CHECK_THROWS_AS(dilate(f, 0.0), InvalidArgument);

  const double ref = oracle::integrate_line(
      [](double t) { return std::sqrt(2.0) * std::exp(-oracle::pi * (4 * t * t + t * t)); });
  CHECK(std::abs(inner(dilate(f, 2.0), f).real() - ref) < 1e-10);

  for (double a : {2.0, 0.5, -1.5, 1.25}) {
    const Signal back = dilate(dilate(f, a), 1.0 / a);
    CHECK(max_diff(back, f) <= 1e-8 * max_abs(f));
  }
}

TEST_CASE("dft examples") {
  const Grid1D g = Grid1D::make(512, 1.0 / 32);
  const Signal f = gaussian(g);
  const Signal F = dft(f);
  CHECK(F.grid() == g.dual());
  double worst = 0.0;
  for (std::size_t k = 0; k < g.n; ++k) {
    const double nu = F.coord(k);
    worst = std::max(worst, std::abs(F[k] - std::exp(-oracle::pi * nu * nu)));
  }
  CHECK(worst < 1e-8);

  // Direct evaluation of the continuous transform by quadrature at a few nu.
  for (std::size_t k : {250u, 256u, 263u, 270u}) {
    const double nu = F.coord(k);
    const double re = oracle::integrate_line([nu](double t) {
      return std::exp(-oracle::pi * t * t) * std::cos(2 * oracle::pi * nu * t);
    });
    CHECK(std::abs(F[k].real() - re) < 1e-10);
  }

  std::vector<cplx> delta(g.n);
  delta[g.n / 2] = 1.0;
  const Signal D = dft(Signal(g, delta));
  for (auto v : D.values()) CHECK(std::abs(std::abs(v) - g.dt) < 1e-15);

  const Signal r = random_signal(9, 3.0, g);
  CHECK(max_diff(idft(dft(r), g), r) < 1e-13);
}

TEST_CASE("dft is unitary") {
  const Grid1D g = Grid1D::make(256, 0.1);
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const Signal f = random_signal(s, 4.0, g).scaled(cplx(1.5, -0.2));
    const Signal h = random_signal(100 + s, 2.0, g);
    const cplx lhs = inner(dft(f), dft(h));
    CHECK(std::abs(lhs - inner(f, h)) <= 1e-10 * f.norm() * h.norm());
  }
}

TEST_CASE("random_signal contract") {
  const Grid1D g = Grid1D::make(512, 1.0 / 16);
  const Signal a = random_signal(42, 2.0, g);
  const Signal b = random_signal(42, 2.0, g);
  for (std::size_t m = 0; m < g.n; ++m) CHECK(a[m] == b[m]);
  CHECK(std::abs(a.energy() - 1.0) < 1e-12);
  CHECK(max_diff(a, random_signal(43, 2.0, g)) > 0.0);

  const Signal A = dft(a);
  double above = 0.0;
  for (std::size_t k = 0; k < g.n; ++k)
    if (std::abs(A.coord(k)) >= 2.0) above = std::max(above, std::abs(A[k]));
  CHECK(above < 1e-14);
  CHECK_THROWS_AS(random_signal(1, g.nyquist(), g), InvalidArgument);
}

TEST_CASE("guard flags edge mass") {
  const Grid1D g = Grid1D::make(512, 1.0 / 16);
  CHECK(guard_ok(gaussian(g)));
  CHECK_FALSE(guard_ok(gaussian(g, {14.0, 0})));
  CHECK(tail_energy_fraction(Signal::zeros(g), 32) == 0.0);
}

TEST_CASE("reflect and hermite parity") {
  const Grid1D g = Grid1D::make(256, 1.0 / 16);
  CHECK(max_diff(reflect(hermite(g, 2)), hermite(g, 2)) < 1e-15);
  CHECK(max_diff(reflect(hermite(g, 3)), hermite(g, 3).scaled(-1.0)) < 1e-15);
  CHECK(std::abs(hermite(g, 0).energy() - 1.0) < 1e-12);
}
