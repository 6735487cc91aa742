#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vanet/geometry.hpp"

namespace vanet {

struct GraphNode {
  std::uint64_t id = 0;
  Point2 pos;
};

/// Equipped vehicles at one instant plus the radio range that links them.
struct ConnectivitySnapshot {
  double time = 0.0;
  std::vector<GraphNode> nodes;
  double range = 0.0;

  std::vector<Point2> positions() const;
};

/// Undirected unit-disk graph in compressed adjacency form. Neighbors of
/// node i are adjacency[offsets[i] .. offsets[i+1]), sorted ascending.
struct UnitDiskGraph {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> adjacency;

  std::size_t node_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t edge_count() const { return adjacency.size() / 2; }
  std::size_t degree(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {adjacency.data() + offsets[i], adjacency.data() + offsets[i + 1]};
  }
  /// Sorted (i < j) edge list.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;
};

/// Largest-cluster and isolation statistics for one snapshot.
///
/// `histogram` maps a component size to the number of components of that
/// size, so the sum of size * count equals the node count. `labels` gives
/// a dense component id per node, numbered in order of first appearance.
/// A single-node snapshot reports phi = theta = 1.
struct ClusterReport {
  std::size_t node_count = 0;
  double phi = 0.0;
  double theta = 0.0;
  std::size_t largest = 0;
  std::map<std::size_t, std::size_t> histogram;
  std::vector<std::uint32_t> labels;
  std::vector<std::uint32_t> component_sizes;
};

/// Edge (u, v) iff |u - v| <= range (closed ball). Uses uniform bucketing
/// with cell size equal to the range. Throws std::invalid_argument for a
/// non-positive range.
UnitDiskGraph build_graph(std::span<const Point2> points, double range);
UnitDiskGraph build_graph(const ConnectivitySnapshot& snap);

/// Connected components through union-find. Empty snapshot yields nullopt.
std::optional<ClusterReport> cluster(const ConnectivitySnapshot& snap);

/// Fills a report from union-find component labels over the first
/// `vehicle_count` entries and an isolation flag per vehicle.
ClusterReport make_report(std::span<const std::uint32_t> roots,
                          std::span<const std::uint8_t> isolated);

/// Smallest range that makes the unit-disk graph connected, i.e. the longest
/// edge of the Euclidean minimum spanning tree. nullopt for fewer than two
/// nodes.
std::optional<double> critical_range(std::span<const Point2> points);
std::optional<double> critical_range(const ConnectivitySnapshot& snap);

/// Connectivity check used by tests and the experiment harness.
bool is_connected(std::span<const Point2> points, double range);

}  // namespace vanet
