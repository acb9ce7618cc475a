#include "psl/chain_graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "psl/error.hpp"
#include "psl/transforms.hpp"

namespace psl {

double default_bound_threshold(const PhaseGrid& grid) {
  return 10.0 * std::hypot(grid.xgrid.dt, grid.xigrid.dt);
}

double default_divergence_threshold(const PhaseGrid& grid) { return 0.5 * grid.xgrid.length(); }

std::vector<std::vector<std::size_t>> PairGraph::chains() const {
  std::vector<long> next(nodes, -1), prev(nodes, -1);
  for (auto [j, k] : edges) {
    next[j] = static_cast<long>(k);
    prev[k] = static_cast<long>(j);
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(nodes, false);
  for (std::size_t s = 0; s < nodes; ++s) {
    if (prev[s] != -1 || seen[s]) continue;
    std::vector<std::size_t> path;
    for (long v = static_cast<long>(s); v != -1 && !seen[v]; v = next[v]) {
      seen[v] = true;
      path.push_back(static_cast<std::size_t>(v));
    }
    out.push_back(std::move(path));
  }
  return out;
}

PairGraph surviving_pair_graph(const std::vector<CenterTrajectory>& trajectories, double tau,
                               double bound_threshold) {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("tau must lie in (0, 1)");
  if (!(bound_threshold > 0.0)) throw InvalidArgument("bound threshold must be positive");
  const std::size_t count = trajectories.size();
  if (count == 0) throw InvalidArgument("no trajectories given");
  const std::size_t len = trajectories.front().points.size();
  for (const auto& t : trajectories)
    if (t.points.empty() || t.points.size() != len)
      throw InvalidArgument("trajectories must be nonempty and of equal length");
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t k = j + 1; k < count; ++k) {
      const double sep = (trajectories[j].points.back() - trajectories[k].points.back()).norm();
      const double need = std::max(trajectories[j].divergence_threshold, trajectories[k].divergence_threshold);
      if (!(sep > need))
        throw InvalidArgument("trajectories " + std::to_string(j) + " and " + std::to_string(k) +
                              " are not separated at the final index");
    }

  auto survives = [&](std::size_t j, std::size_t k) {
    double worst = 0.0;
    for (std::size_t n = 0; n < len; ++n)
      worst = std::max(worst, covariance_center(trajectories[j].points[n], trajectories[k].points[n], tau).norm());
    return worst <= bound_threshold;
  };

  PairGraph g;
  g.nodes = count;
  g.undirected = tau == 0.5;
  std::vector<std::size_t> out_deg(count, 0), in_deg(count, 0);
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t k = g.undirected ? j + 1 : 0; k < count; ++k) {
      if (j == k || !survives(j, k)) continue;
      g.edges.emplace_back(j, k);
      ++out_deg[j];
      ++in_deg[k];
    }
  for (std::size_t v = 0; v < count; ++v) {
    const std::size_t deg = g.undirected ? out_deg[v] + in_deg[v] : std::max(out_deg[v], in_deg[v]);
    if (deg > 1)
      throw HypothesisViolation("profile " + std::to_string(v) + " survives with more than one partner");
  }
  if (!g.undirected) {
    // With in/out degree <= 1 a cycle is a loop of successor links.
    std::vector<long> next(count, -1);
    for (auto [j, k] : g.edges) next[j] = static_cast<long>(k);
    for (std::size_t s = 0; s < count; ++s) {
      long v = next[s];
      for (std::size_t steps = 0; v != -1 && steps <= count; ++steps) {
        if (static_cast<std::size_t>(v) == s) throw HypothesisViolation("surviving pairs form a cycle");
        v = next[static_cast<std::size_t>(v)];
      }
    }
  }
  return g;
}

SyntheticFamily synthetic_family(std::uint64_t seed, std::optional<double> tau) {
  std::mt19937_64 rng(seed);
  // Fixed by the standard, unlike the library distributions.
  auto unit = [&rng] { return 2.0 * ((static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53) - 1.0; };
  SyntheticFamily fam;
  if (tau) {
    fam.tau = *tau;
  } else {
    const bool half = rng() % 4 == 0;
    const double side = 0.25 + 0.15 * unit();
    fam.tau = half ? 0.5 : (unit() < 0 ? side : 1 - side);
  }
  const double rx = -(1 - fam.tau) / fam.tau, rxi = -fam.tau / (1 - fam.tau);
  const int count = 2 + static_cast<int>(rng() % 6);
  std::vector<PhasePoint> dirs;
  for (int k = 0; k < count; ++k) {
    if (k > 0 && unit() > -0.6)
      dirs.push_back({rx * dirs.back().x, rxi * dirs.back().xi});
    else
      dirs.push_back({unit() * 3 + 4 * k, unit() * 3 - 5 * k});
  }
  for (const auto& d : dirs) {
    CenterTrajectory t;
    for (int n = 1; n <= 40; ++n) {
      const double ex = 0.01 * unit(), exi = 0.01 * unit();
      t.points.push_back(PhasePoint{n * d.x + ex, n * d.xi + exi});
    }
    t.divergence_threshold = 20.0;
    fam.trajectories.push_back(std::move(t));
  }
  return fam;
}

}  // namespace psl
