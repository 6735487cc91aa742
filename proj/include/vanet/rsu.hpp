#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vanet/connectivity.hpp"
#include "vanet/geometry.hpp"
#include "vanet/road_network.hpp"

namespace vanet {

enum class RsuPlacement { AtIntersections, MidSegment, Custom };

/// Parses "intersections", "midsegment" or "custom".
RsuPlacement parse_rsu_placement(std::string_view s);
std::string_view to_string(RsuPlacement p);

/// Roadside units sharing one wired backbone.
struct RsuDeployment {
  std::vector<Point2> positions;
  double range = 100.0;
  RsuPlacement policy = RsuPlacement::AtIntersections;
};

/// AtIntersections puts one unit on each of the n^2 intersections,
/// MidSegment one at the middle of every undirected segment. Custom takes
/// `custom` and throws std::invalid_argument for any position off the road
/// lines.
RsuDeployment place_rsus(const RoadNetwork& net, RsuPlacement policy, double range,
                         std::span<const Point2> custom = {});

/// Vehicle-to-vehicle graph plus one virtual backbone node adjacent to every
/// vehicle within dep.range of any unit. phi and theta count vehicles only;
/// a vehicle with an RSU in range is not isolated. nullopt when empty.
std::optional<ClusterReport> hybrid_cluster(const ConnectivitySnapshot& snap,
                                            const RsuDeployment& dep);

/// Deployment file: header "x,y" then one unit per line.
std::vector<Point2> read_rsu_positions(const std::filesystem::path& path);
void write_rsu_positions(const std::filesystem::path& path, std::span<const Point2> positions);

}  // namespace vanet
