#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "psl/phase_grid.hpp"

namespace psl {

/// Synthetic center path z^{(n)}, n = 0..N-1, of one escaping profile.
struct CenterTrajectory {
  std::vector<PhasePoint> points;
  double divergence_threshold = 0.0;
};

/// Surviving ordered pairs (j, k). For tau = 1/2 the relation is symmetric
/// and each pair is stored once with j < k.
struct PairGraph {
  std::size_t nodes = 0;
  bool undirected = false;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  /// Maximal paths, each listed from its source; isolated nodes included.
  std::vector<std::vector<std::size_t>> chains() const;
};

/// Default finite proxies: ten cell diameters for "bounded", half the x
/// extent of the grid for "divergent".
double default_bound_threshold(const PhaseGrid& grid);
double default_divergence_threshold(const PhaseGrid& grid);

/// Edge (j, k) iff max_n |c_tau(z_j^{(n)}, z_k^{(n)})| <= bound_threshold.
/// Throws InvalidArgument when the trajectories break the separation
/// precondition and HypothesisViolation when the result is not a disjoint
/// union of chains (degree above one, or a directed cycle for tau != 1/2).
PairGraph surviving_pair_graph(const std::vector<CenterTrajectory>& trajectories, double tau,
                               double bound_threshold);

struct SyntheticFamily {
  double tau = 0.5;
  std::vector<CenterTrajectory> trajectories;
};

/// Seeded family of 2..7 straight escaping paths z^{(n)} = n d + noise,
/// n = 1..40, with divergence threshold 20. Each direction is either fresh or
/// the chain partner (r_x d_x, r_xi d_xi), r_x = -(1 - tau)/tau,
/// r_xi = -tau/(1 - tau), of the previous one, which keeps c_tau bounded.
/// Without a given tau, tau = 1/2 for a quarter of the seeds and otherwise
/// lies in [0.1, 0.4] or [0.6, 0.9].
SyntheticFamily synthetic_family(std::uint64_t seed, std::optional<double> tau = std::nullopt);

}  // namespace psl
