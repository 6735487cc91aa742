#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "vanet/geometry.hpp"

namespace vanet {

/// Uniform bucketing of points into square cells. Radius queries with a
/// radius no larger than the cell size only visit the 3x3 neighborhood.
class SpatialHash {
 public:
  SpatialHash(std::span<const Point2> points, double cell) : points_(points), cell_(cell) {
    order_.resize(points.size());
    std::vector<std::uint64_t> keys(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      keys[i] = key(cell_of(points[i].x), cell_of(points[i].y));
      order_[i] = static_cast<std::uint32_t>(i);
    }
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
      return keys[a] != keys[b] ? keys[a] < keys[b] : a < b;
    });
    ranges_.reserve(points.size());
    std::size_t i = 0;
    while (i < order_.size()) {
      std::size_t j = i;
      const auto k = keys[order_[i]];
      while (j < order_.size() && keys[order_[j]] == k) ++j;
      ranges_.emplace(k, Range{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
      i = j;
    }
  }

  /// Calls fn(j) for every point j with distance(p, point j) <= r.
  /// Requires r <= cell.
  template <typename Fn>
  void for_each_within(Point2 p, double r, Fn&& fn) const {
    const auto cx = cell_of(p.x);
    const auto cy = cell_of(p.y);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = ranges_.find(key(cx + dx, cy + dy));
        if (it == ranges_.end()) continue;
        for (std::uint32_t k = it->second.begin; k < it->second.end; ++k) {
          const std::uint32_t j = order_[k];
          if (distance(p, points_[j]) <= r) fn(j);
        }
      }
    }
  }

 private:
  struct Range {
    std::uint32_t begin;
    std::uint32_t end;
  };

  std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static std::uint64_t key(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ (static_cast<std::uint64_t>(cy) & 0xffffffffULL);
  }

  std::span<const Point2> points_;
  double cell_;
  std::vector<std::uint32_t> order_;
  std::unordered_map<std::uint64_t, Range> ranges_;
};

}  // namespace vanet
