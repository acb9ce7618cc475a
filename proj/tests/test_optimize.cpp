#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "psl/error.hpp"
#include "psl/optimize.hpp"
#include "psl/parallel.hpp"

using namespace psl;

namespace {

const Grid1D kSmall = Grid1D::make(64, 1.0 / 8);

Signal packet(Grid1D g, std::uint64_t seed, PhasePoint at = {}, double width = 1.2) {
  const Signal r = random_signal(seed, 0.5 * g.half_band(), g);
  const Signal env = gaussian(g, {at.x, 0.0}, width);
  std::vector<cplx> v(g.n);
  for (std::size_t m = 0; m < g.n; ++m) v[m] = r[m] * env[m];
  return normalized(half_band_project(modulate(Signal(g, v), at.xi)));
}

AscentConfig disk_config(double p, double radius = 1.0) {
  const auto grid = PhaseGrid::wigner(kSmall, 1, Window::centered(3, 3));
  return AscentConfig{.mask = DomainMask::disk(grid, {}, radius), .p = p};
}

double best_fd_error(const Signal& f, const Signal& v, const Signal& grad,
                     const std::function<double(const Signal&)>& fn) {
  const double analytic = inner(grad, v).real();
  double best = 1e300;
  for (double eps : {1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6}) {
    const double fd = (fn(f.axpy(eps, v)) - fn(f.axpy(-eps, v))) / (2 * eps);
    best = std::min(best, std::abs(fd - analytic) / std::abs(analytic));
  }
  return best;
}

double overlap(const Signal& a, const Signal& b) { return std::abs(inner(a, b)) / (a.norm() * b.norm()); }

bool nondecreasing(const std::vector<double>& t) {
  for (std::size_t k = 1; k < t.size(); ++k)
    if (t[k] < t[k - 1]) return false;
  return true;
}

}  // namespace

TEST_CASE("gradient matches central differences") {
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const AscentConfig cfg = disk_config(p);
    for (std::uint64_t s = 0; s < 6; ++s) {
      const Signal f = packet(kSmall, 10 + s, {0.3, -0.2});
      const Signal v = packet(kSmall, 50 + s, {-0.4, 0.1});
      const auto F = [&](const Signal& h) { return objective_power(h, cfg); };
      const auto J = [&](const Signal& h) { return objective(h, cfg); };
      CHECK(best_fd_error(f, v, gradient(f, cfg), F) <= 1e-5);
      CHECK(best_fd_error(f, v, normalized_gradient(f, cfg), J) <= 1e-5);
    }
  }
}

TEST_CASE("gradient of a Gaussian at p = 4") {
  const AscentConfig cfg = disk_config(4.0);
  const Signal f = gaussian(kSmall, {0.25, 0.125});
  const Signal v = packet(kSmall, 3);
  CHECK(best_fd_error(f, v, gradient(f, cfg), [&](const Signal& h) { return objective_power(h, cfg); }) <=
        1e-5);
}

TEST_CASE("gradient in a flat region and at non-smooth points") {
  const AscentConfig cfg = disk_config(2.0, 0.5);
  const Signal far = gaussian(kSmall, {3.5, 0.0}, 0.3);
  CHECK(gradient(far, cfg).norm() <= 1e-12);

  AscentConfig one = cfg;
  one.p = 1.0;
  CHECK_THROWS_AS(gradient(Signal::zeros(kSmall), one), InvalidArgument);
  // Wf vanishes to rounding on the whole mask.
  CHECK_THROWS_AS(gradient(far, one), NonSmoothPoint);
  AscentConfig inf_cfg = cfg;
  inf_cfg.p = kInf;
  CHECK_THROWS_AS(gradient(far, inf_cfg), InvalidArgument);
}

TEST_CASE("ascent config validation") {
  AscentConfig cfg = disk_config(2.0);
  CHECK_NOTHROW(cfg.validate());
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = disk_config(2.0);
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = disk_config(2.0);
  cfg.kind = FieldKind::BornJordan;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = disk_config(0.5);
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("ascent is monotone and scale invariant") {
  for (double p : {1.5, 2.0, 4.0}) {
    AscentConfig cfg = disk_config(p);
    cfg.max_iter = 200;
    const Signal f = packet(kSmall, 77, {0.5, 0.3});
    const AscentRun a = ascend(f, cfg), b = ascend(f.scaled(3.0), cfg);
    CHECK(nondecreasing(a.trace));
    CHECK(a.value >= a.trace.front());
    CHECK(a.value > a.trace.front() + 1e-3);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) CHECK(std::abs(a.trace[k] - b.trace[k]) <= 1e-12);
  }
}

TEST_CASE("initial dictionary layout") {
  AscentConfig cfg = disk_config(2.0);
  cfg.restarts = 12;
  const auto d = initial_dictionary(cfg, 12);
  REQUIRE(d.size() == 12);
  for (const auto& s : d) CHECK(s.energy() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlap(d[0], gaussian(kSmall)) >= 0.999999);
  CHECK(overlap(d[9], hermite(kSmall, 1)) >= 0.999999);
  CHECK(std::abs(inner(d[0], d[9])) <= 1e-10);
  CHECK(overlap(d[10], d[11]) < 0.9);
  CHECK(initial_dictionary(cfg, 3).size() == 3);
}

TEST_CASE("maximize dominates its Gaussian start and respects the coarse bound") {
  for (double p : {1.5, 2.0, 4.0}) {
    AscentConfig cfg = disk_config(p);
    cfg.restarts = 11;
    cfg.max_iter = 300;
    const AscentReport r = maximize(cfg);
    for (const auto& run : r.runs) CHECK(nondecreasing(run.trace));
    CHECK(r.best_value >= objective(gaussian(kSmall), cfg) - cfg.tol);
    CHECK(r.best_value <= 2 * std::pow(cfg.mask.measure(), 1 / p) + cfg.tol);
    CHECK(r.restart_values.size() == 11);
    const double top = *std::max_element(r.restart_values.begin(), r.restart_values.end());
    CHECK(r.best_value >= top - cfg.tol * top);
    CHECK(r.best_value == r.restart_values[r.best_restart]);
  }
}

TEST_CASE("maximize is independent of the thread count") {
  AscentConfig cfg = disk_config(3.0);
  cfg.restarts = 12;
  cfg.max_iter = 100;
  set_thread_count(1);
  const AscentReport a = maximize(cfg);
  set_thread_count(4);
  const AscentReport b = maximize(cfg);
  set_thread_count(1);
  CHECK(a.restart_values == b.restart_values);
  CHECK(a.trace == b.trace);
  CHECK(a.best_restart == b.best_restart);
}

TEST_CASE("maximize over an effectively full grid gives the Moyal value") {
  const auto grid = PhaseGrid::wigner(kSmall);
  AscentConfig cfg{.mask = DomainMask::almost_full(grid), .p = 2.0};
  cfg.restarts = 3;
  const AscentReport r = maximize(cfg);
  CHECK(std::abs(r.best_value - 1.0) <= 1e-3);
}

TEST_CASE("maximize beats the localization baseline on the unit disk") {
  AscentConfig cfg = disk_config(2.0);
  cfg.restarts = 2;
  const Eigenpair e = localization_baseline(cfg.mask);
  CHECK(maximize(cfg).best_value >= objective(e.vector, cfg) - cfg.tol);
}

namespace {

// Dense matrix of P T P from the definition of the discrete Wigner sum
// W(f)(x_m, xi) = 2 dt sum_l f[m + l] conj(f[m - l]) e^{-4 pi i xi l dt}.
Eigen::MatrixXcd dense_localization(const DomainMask& mask) {
  const PhaseGrid& pg = mask.grid();
  const Grid1D g = pg.xgrid;
  const long n = static_cast<long>(g.n);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < pg.rows; ++i) {
    const long m = static_cast<long>(pg.row0 + i);
    for (long l = -std::min(m, n - 1 - m); l <= std::min(m, n - 1 - m); ++l) {
      std::complex<double> s = 0.0;
      for (std::size_t j = 0; j < pg.bins; ++j)
        if (mask.contains(i, j)) s += std::polar(1.0, -4 * oracle::pi * pg.xi(j) * l * g.dt);
      H(m - l, m + l) += 2 * g.dt * pg.cell_area() * s;
    }
  }
  // Operator in the dt-weighted inner product.
  H /= g.dt;
  Eigen::MatrixXcd U(n, n);
  Eigen::VectorXd keep(n);
  for (long k = 0; k < n; ++k) {
    const double nu = (k - n / 2) / g.length();
    keep(k) = std::abs(nu) < g.half_band() ? 1.0 : 0.0;
    for (long m = 0; m < n; ++m) U(k, m) = std::polar(1.0 / std::sqrt(double(n)), -2 * oracle::pi * nu * g.coord(m));
  }
  const Eigen::MatrixXcd P = U.adjoint() * keep.asDiagonal() * U;
  const Eigen::MatrixXcd M = P * H * P;
  return 0.5 * (M + M.adjoint());
}

}  // namespace

TEST_CASE("localization eigenpairs agree with dense diagonalization") {
  const auto grid = PhaseGrid::wigner(kSmall);
  for (double radius : {0.6, 1.0}) {
    const DomainMask mask = DomainMask::disk(grid, {0.25, 0.0}, radius);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_localization(mask));
    const long n = static_cast<long>(kSmall.n);
    const auto pairs = localization_eigenpairs(mask, 2);
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(pairs[k].value - es.eigenvalues()(n - 1 - k)) <= 1e-8);
      std::vector<cplx> v(kSmall.n);
      for (long m = 0; m < n; ++m) v[m] = es.eigenvectors()(m, n - 1 - k);
      CHECK(overlap(pairs[k].vector, Signal(kSmall, v)) >= 1 - 1e-8);
    }
  }
}

TEST_CASE("localization baseline examples") {
  const auto grid = PhaseGrid::wigner(kSmall);
  const Eigenpair disk = localization_baseline(DomainMask::disk(grid, {}, 1.0));
  CHECK(overlap(disk.vector, gaussian(kSmall)) >= 0.999);
  CHECK(disk.value == doctest::Approx(1 - std::exp(-2 * oracle::pi)).epsilon(1e-3));

  const Eigenpair full = localization_baseline(DomainMask::almost_full(grid));
  CHECK(std::abs(full.value - 1.0) <= 1e-3);

  PowerOptions tight;
  tight.max_iter = 3;
  CHECK_THROWS_AS(localization_baseline(DomainMask::disk(grid, {}, 1.0), tight), ConvergenceError);
}

TEST_CASE("linfty optimizer") {
  const Grid1D g = Grid1D::make(512, 1.0 / 16);
  const auto grid = PhaseGrid::wigner(g, 1, Window::centered(8, 8));
  const auto origin = linfty_optimizer(DomainMask::disk(grid, {}, 1.0));
  CHECK(std::abs(origin.value - 2.0) <= 1e-6);
  CHECK(origin.center == PhasePoint{0.0, 0.0});
  CHECK(overlap(origin.signal, gaussian(g)) >= 1 - 1e-12);

  const auto far = linfty_optimizer(DomainMask::disk(grid, {5.0, -3.0}, 0.6));
  CHECK(std::abs(far.value - 2.0) <= 1e-6);
  CHECK((far.center - PhasePoint{5.0, -3.0}).norm() <= 0.1);

  const auto odd = linfty_optimizer(DomainMask::disk(grid, {1.0, 2.0}, 0.5), FieldKind::Wigner, true);
  CHECK(std::abs(odd.value - 2.0) <= 1e-6);
  CHECK_THROWS_AS(linfty_optimizer(DomainMask::disk(grid, {}, 1.0), FieldKind::TauWigner), InvalidArgument);
}

TEST_CASE("tau L-infinity family") {
  const double tau = 0.25;
  const auto fam = tau_linfty_family(tau, 6);
  CHECK(fam.sup_predicted == doctest::Approx(std::pow(3.0 / 16, -0.5)).epsilon(1e-15));
  // Dilation overlap: in log coordinates D_{-s} is a shift by log s, and two
  // Gaussians of width sigma shifted by d overlap by e^{-d^2 / (4 sigma^2)}.
  const double d = std::log(tau / (1 - tau));
  for (std::size_t k = 0; k < fam.values.size(); ++k) {
    const double s = fam.sigmas[k];
    CHECK(fam.values[k] ==
          doctest::Approx(fam.sup_predicted * std::exp(-d * d / (4 * s * s))).epsilon(1e-10));
    CHECK(fam.values[k] < fam.sup_predicted);
    if (k > 0) CHECK(fam.values[k] > fam.values[k - 1]);
  }
  CHECK(fam.values.back() >= 0.95 * fam.sup_predicted);

  const auto odd = tau_linfty_family(tau, 3, true);
  for (std::size_t k = 0; k < 3; ++k) CHECK(odd.values[k] == doctest::Approx(-fam.values[k]).epsilon(1e-12));

  CHECK(tau_linfty_family(0.5 - 1e-9, 1).sup_predicted == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(tau_linfty_family(0.5, 3), InvalidArgument);
  CHECK_THROWS_AS(tau_linfty_family(0.0, 3), InvalidArgument);
  CHECK_THROWS_AS(tau_linfty_family(0.25, 0), InvalidArgument);
  CHECK_THROWS_AS(tau_linfty_family(0.25, std::vector<double>{128.0}), GuardViolation);
}

TEST_CASE("Born-Jordan L-infinity family") {
  const auto fam = bj_linfty_family(6);
  REQUIRE(fam.khat_check.has_value());
  CHECK(*fam.khat_check <= 1e-8);
  CHECK(fam.sup_predicted == oracle::pi);
  for (std::size_t k = 0; k < fam.values.size(); ++k) {
    const double s = fam.sigmas[k];
    // With s = log(tau / (1 - tau)) the tau average becomes the convolution
    // kernel 1 / (2 cosh(s / 2)) against the log-coordinate autocorrelation.
    const double expect = oracle::integrate_line([s](double u) {
      return std::exp(-u * u / (4 * s * s)) / (2 * std::cosh(u / 2));
    });
    CHECK(fam.values[k] == doctest::Approx(expect).epsilon(1e-9));
    CHECK(fam.values[k] < oracle::pi);
    if (k > 0) CHECK(fam.values[k] > fam.values[k - 1]);
  }
  CHECK(fam.values.back() >= 0.95 * oracle::pi);

  const auto odd = bj_linfty_family(2, true);
  for (std::size_t k = 0; k < 2; ++k) CHECK(odd.values[k] == doctest::Approx(-fam.values[k]).epsilon(1e-12));
  CHECK_THROWS_AS(bj_linfty_family(std::vector<double>{200.0}), GuardViolation);
}

TEST_CASE("ascent report JSON") {
  AscentConfig cfg = disk_config(2.0);
  cfg.restarts = 1;
  cfg.max_iter = 5;
  const AscentReport r = maximize(cfg);
  const auto j = ascent_report_to_json(r, cfg);
  CHECK(j.at("best_value").get<double>() == r.best_value);
  CHECK(j.at("trace").size() == r.trace.size());
  CHECK(j.at("config").at("kind") == "wigner");
}
