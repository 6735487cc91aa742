#include "vanet/rsu.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include "vanet/csv.hpp"
#include "vanet/spatial_hash.hpp"
#include "vanet/union_find.hpp"

namespace vanet {

RsuPlacement parse_rsu_placement(std::string_view s) {
  if (s == "intersections") return RsuPlacement::AtIntersections;
  if (s == "midsegment") return RsuPlacement::MidSegment;
  if (s == "custom") return RsuPlacement::Custom;
  throw std::invalid_argument("unknown RSU placement '" + std::string(s) + "'");
}

std::string_view to_string(RsuPlacement p) {
  switch (p) {
    case RsuPlacement::AtIntersections: return "intersections";
    case RsuPlacement::MidSegment: return "midsegment";
    case RsuPlacement::Custom: return "custom";
  }
  return "?";
}

RsuDeployment place_rsus(const RoadNetwork& net, RsuPlacement policy, double range,
                         std::span<const Point2> custom) {
  if (!(range > 0.0)) throw std::invalid_argument("RSU range must be positive");
  RsuDeployment dep;
  dep.range = range;
  dep.policy = policy;
  switch (policy) {
    case RsuPlacement::AtIntersections:
      for (const auto& nd : net.nodes()) {
        if (nd.kind == NodeKind::Intersection) dep.positions.push_back(nd.pos);
      }
      break;
    case RsuPlacement::MidSegment:
      for (const auto& s : net.segments()) {
        dep.positions.push_back(0.5 * (net.node(s.a).pos + net.node(s.b).pos));
      }
      break;
    case RsuPlacement::Custom:
      for (const auto& p : custom) {
        if (!net.on_network(p)) {
          throw std::invalid_argument("RSU at (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                      ") is off the road network");
        }
        dep.positions.push_back(p);
      }
      break;
  }
  return dep;
}

std::optional<ClusterReport> hybrid_cluster(const ConnectivitySnapshot& snap,
                                            const RsuDeployment& dep) {
  if (snap.nodes.empty()) return std::nullopt;
  const auto pts = snap.positions();
  const auto g = build_graph(pts, snap.range);
  const std::size_t k = pts.size();
  const auto backbone = static_cast<std::uint32_t>(k);

  UnionFind uf(k + 1);
  for (std::uint32_t i = 0; i < k; ++i) {
    for (auto j : g.neighbors(i)) {
      if (i < j) uf.unite(i, j);
    }
  }
  std::vector<std::uint8_t> covered(k, 0);
  if (!dep.positions.empty()) {
    const double cell = dep.range * (1.0 + 1e-9) + 1e-12;
    const SpatialHash units(dep.positions, cell);
    for (std::uint32_t i = 0; i < k; ++i) {
      units.for_each_within(pts[i], dep.range, [&](std::uint32_t) { covered[i] = 1; });
      if (covered[i]) uf.unite(i, backbone);
    }
  }

  std::vector<std::uint32_t> roots(k);
  std::vector<std::uint8_t> isolated(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    roots[i] = uf.find(i);
    isolated[i] = (g.degree(i) == 0 && !covered[i]) ? 1 : 0;
  }
  return make_report(roots, isolated);
}

std::vector<Point2> read_rsu_positions(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  const auto xi = table.column("x");
  const auto yi = table.column("y");
  std::vector<Point2> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    out.push_back({parse_double(row.at(xi)), parse_double(row.at(yi))});
  }
  return out;
}

void write_rsu_positions(const std::filesystem::path& path, std::span<const Point2> positions) {
  CsvWriter w(path, {"x", "y"});
  for (const auto& p : positions) w.row({format_double(p.x), format_double(p.y)});
}

}  // namespace vanet
