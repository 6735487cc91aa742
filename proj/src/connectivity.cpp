#include "vanet/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "vanet/spatial_hash.hpp"
#include "vanet/union_find.hpp"

namespace vanet {

namespace {

// Cell slightly larger than the range so that points at exactly the range
// never fall two cells apart through rounding.
double cell_for(double range) { return range * (1.0 + 1e-9) + 1e-12; }

struct WeightedEdge {
  double d;
  std::uint32_t a;
  std::uint32_t b;
};

double prim_bottleneck(std::span<const Point2> pts) {
  const std::size_t k = pts.size();
  std::vector<double> best(k, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> in_tree(k, 0);
  best[0] = 0.0;
  double bottleneck = 0.0;
  for (std::size_t iter = 0; iter < k; ++iter) {
    std::size_t u = k;
    double bu = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      if (!in_tree[i] && best[i] < bu) {
        bu = best[i];
        u = i;
      }
    }
    in_tree[u] = 1;
    bottleneck = std::max(bottleneck, bu);
    for (std::size_t i = 0; i < k; ++i) {
      if (!in_tree[i]) best[i] = std::min(best[i], distance(pts[u], pts[i]));
    }
  }
  return bottleneck;
}

}  // namespace

std::vector<Point2> ConnectivitySnapshot::positions() const {
  std::vector<Point2> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.pos);
  return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> UnitDiskGraph::edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(edge_count());
  for (std::uint32_t i = 0; i < node_count(); ++i) {
    for (auto j : neighbors(i)) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

UnitDiskGraph build_graph(std::span<const Point2> points, double range) {
  if (!(range > 0.0)) throw std::invalid_argument("connectivity range must be positive");
  const std::size_t k = points.size();
  UnitDiskGraph g;
  g.offsets.assign(k + 1, 0);
  if (k == 0) return g;

  const SpatialHash hash(points, cell_for(range));
  std::vector<std::uint32_t> scratch;
  for (std::size_t i = 0; i < k; ++i) {
    scratch.clear();
    hash.for_each_within(points[i], range, [&](std::uint32_t j) {
      if (j != i) scratch.push_back(j);
    });
    std::sort(scratch.begin(), scratch.end());
    g.adjacency.insert(g.adjacency.end(), scratch.begin(), scratch.end());
    g.offsets[i + 1] = static_cast<std::uint32_t>(g.adjacency.size());
  }
  return g;
}

UnitDiskGraph build_graph(const ConnectivitySnapshot& snap) {
  const auto pts = snap.positions();
  return build_graph(pts, snap.range);
}

ClusterReport make_report(std::span<const std::uint32_t> roots,
                          std::span<const std::uint8_t> isolated) {
  ClusterReport rep;
  const std::size_t k = roots.size();
  rep.node_count = k;
  rep.labels.resize(k);
  std::unordered_map<std::uint32_t, std::uint32_t> dense;
  dense.reserve(k);
  std::size_t n_isolated = 0;
  for (std::size_t i = 0; i < k; ++i) {
    auto [it, fresh] = dense.try_emplace(roots[i], static_cast<std::uint32_t>(dense.size()));
    if (fresh) rep.component_sizes.push_back(0);
    rep.labels[i] = it->second;
    ++rep.component_sizes[it->second];
    n_isolated += isolated[i] ? 1 : 0;
  }
  for (auto s : rep.component_sizes) {
    ++rep.histogram[s];
    rep.largest = std::max<std::size_t>(rep.largest, s);
  }
  if (k > 0) {
    rep.phi = static_cast<double>(n_isolated) / static_cast<double>(k);
    rep.theta = static_cast<double>(rep.largest) / static_cast<double>(k);
  }
  return rep;
}

std::optional<ClusterReport> cluster(const ConnectivitySnapshot& snap) {
  if (snap.nodes.empty()) return std::nullopt;
  const auto g = build_graph(snap);
  const std::size_t k = snap.nodes.size();
  UnionFind uf(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    for (auto j : g.neighbors(i)) {
      if (i < j) uf.unite(i, j);
    }
  }
  std::vector<std::uint32_t> roots(k);
  std::vector<std::uint8_t> isolated(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    roots[i] = uf.find(i);
    isolated[i] = g.degree(i) == 0 ? 1 : 0;
  }
  return make_report(roots, isolated);
}

std::optional<double> critical_range(std::span<const Point2> points) {
  const std::size_t k = points.size();
  if (k < 2) return std::nullopt;

  double xmin = points[0].x, xmax = points[0].x, ymin = points[0].y, ymax = points[0].y;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double diag = std::hypot(xmax - xmin, ymax - ymin);
  if (diag == 0.0) return 0.0;

  // Kruskal in rounds of doubling radius. A round only collects pairs longer
  // than the previous radius that still join different components, so the
  // dense short-range structure (queues) is sorted once and then contracted.
  const std::size_t dense_limit = k * (k - 1) / 4;
  double radius = std::max(diag / std::sqrt(static_cast<double>(k)), diag * 1e-9);
  double done = -1.0;  // every pair with d <= done has been offered to Kruskal
  UnionFind uf(k);
  std::vector<WeightedEdge> edges;
  while (true) {
    radius = std::min(radius, diag * (1.0 + 1e-9));
    edges.clear();
    const SpatialHash hash(points, cell_for(radius));
    bool too_many = false;
    for (std::uint32_t i = 0; i < k && !too_many; ++i) {
      const std::uint32_t ri = uf.find(i);
      hash.for_each_within(points[i], radius, [&](std::uint32_t j) {
        if (i >= j) return;
        const double d = distance(points[i], points[j]);
        if (d > done && uf.find(j) != ri) edges.push_back({d, i, j});
      });
      too_many = edges.size() > dense_limit;
    }
    if (too_many) return prim_bottleneck(points);

    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
      return a.d < b.d;
    });
    for (const auto& e : edges) {
      if (uf.unite(e.a, e.b) && uf.components() == 1) return e.d;
    }
    done = radius;
    radius *= 2.0;
  }
}

std::optional<double> critical_range(const ConnectivitySnapshot& snap) {
  const auto pts = snap.positions();
  return critical_range(pts);
}

bool is_connected(std::span<const Point2> points, double range) {
  if (points.size() <= 1) return true;
  const auto g = build_graph(points, range);
  UnionFind uf(points.size());
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    for (auto j : g.neighbors(i)) uf.unite(i, j);
  }
  return uf.components() == 1;
}

}  // namespace vanet
