#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "vanet/geometry.hpp"

namespace vanet {

using NodeId = std::int32_t;
using LaneId = std::int32_t;
using SegmentId = std::int32_t;

inline constexpr std::int32_t kNone = -1;

enum class Axis : std::uint8_t { Horizontal, Vertical };

/// Direction of travel. Counter-clockwise order, so rotating left is +1.
enum class Heading : std::uint8_t { East = 0, North = 1, West = 2, South = 3 };

/// Side of the grid an endpoint sits on.
enum class Side : std::uint8_t { West = 0, East = 1, South = 2, North = 3 };

enum class NodeKind : std::uint8_t { Intersection, Endpoint };

enum class SegmentClass : std::uint8_t { Peripheral, Central };

inline constexpr std::array<Heading, 4> kHeadings = {Heading::East, Heading::North,
                                                     Heading::West, Heading::South};

constexpr Axis axis_of(Heading h) {
  return (h == Heading::East || h == Heading::West) ? Axis::Horizontal : Axis::Vertical;
}
constexpr Heading rotate_left(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 1) % 4);
}
constexpr Heading reverse(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 2) % 4);
}
/// Heading of a vehicle that arrives from the right-hand side of a vehicle
/// travelling along `h`. Eastbound traffic yields to northbound traffic.
constexpr Heading heading_from_right(Heading h) { return rotate_left(h); }

struct Node {
  NodeKind kind;
  Point2 pos;
  int col = -1;  // intersections only
  int row = -1;  // intersections only
  Side side = Side::West;  // endpoints only
  int road = -1;           // endpoints only: index of the road it terminates
};

struct Segment {
  NodeId a;  // lower coordinate end
  NodeId b;  // higher coordinate end
  Axis axis;
  int road;
  SegmentClass cls;
  LaneId forward;   // a -> b
  LaneId backward;  // b -> a
};

struct Lane {
  NodeId from;
  NodeId to;
  SegmentId segment;
  Heading heading;
  Point2 start;
  Point2 end;
};

/// Position along a directed lane, `offset` meters from its start.
struct LanePosition {
  LaneId lane = kNone;
  double offset = 0.0;
};

/// Hash-shaped grid: n horizontal roads (y = row * L) crossing n vertical
/// roads (x = col * L). Every road ends one segment length beyond the
/// outermost intersection in an entry/exit endpoint. Each road carries one
/// lane per direction and both lanes share the road's geometric line.
class RoadNetwork {
 public:
  /// Throws std::invalid_argument unless n >= 2 and segment_length > 0.
  RoadNetwork(int n, double segment_length);

  int n() const { return n_; }
  double segment_length() const { return length_; }

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Segment> segments() const { return segments_; }
  std::span<const Lane> lanes() const { return lanes_; }

  const Node& node(NodeId id) const;
  const Segment& segment(SegmentId id) const;
  const Lane& lane(LaneId id) const;

  std::size_t intersection_count() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t endpoint_count() const { return 4 * static_cast<std::size_t>(n_); }

  NodeId intersection(int col, int row) const;
  NodeId endpoint(Side side, int road) const;
  std::span<const NodeId> endpoints() const { return endpoint_ids_; }
  bool is_endpoint(NodeId id) const { return node(id).kind == NodeKind::Endpoint; }

  /// Neighbor of `node` in direction `h`, or kNone. O(1).
  NodeId neighbor(NodeId node, Heading h) const;
  /// Lane leaving `node` in direction `h`, or kNone. O(1).
  LaneId outgoing(NodeId node, Heading h) const;
  /// Lane arriving at `node` while travelling in direction `h`, or kNone.
  LaneId incoming(NodeId node, Heading h) const;

  /// The single lane leaving an endpoint into the grid.
  LaneId entry_lane(NodeId endpoint) const;
  /// The single lane arriving at an endpoint from the grid.
  LaneId exit_lane(NodeId endpoint) const;

  /// Endpoint at the other end of the same road.
  NodeId opposite_endpoint(NodeId endpoint) const;
  /// The n endpoints on the side opposite to `endpoint`, ordered by road.
  std::vector<NodeId> opposite_side_endpoints(NodeId endpoint) const;

  /// Throws std::out_of_range for an unknown lane. Offsets are clamped to
  /// [0, L].
  Point2 plane_coords(LanePosition p) const;

  /// Throws std::out_of_range for an unknown segment.
  SegmentClass classify_segment(SegmentId id) const;

  std::size_t count(SegmentClass cls) const;

  /// True when `p` lies on one of the road lines, within `tol` meters.
  bool on_network(Point2 p, double tol = 1e-6) const;

 private:
  SegmentId add_segment(NodeId a, NodeId b, Axis axis, int road);

  int n_;
  double length_;
  std::vector<Node> nodes_;
  std::vector<Segment> segments_;
  std::vector<Lane> lanes_;
  std::vector<NodeId> endpoint_ids_;
  std::vector<std::array<NodeId, 4>> neighbor_;
  std::vector<std::array<LaneId, 4>> out_;
  std::vector<std::array<LaneId, 4>> in_;
};

/// Convenience factory mirroring the constructor.
inline RoadNetwork build_grid(int n, double segment_length) {
  return RoadNetwork(n, segment_length);
}

}  // namespace vanet
