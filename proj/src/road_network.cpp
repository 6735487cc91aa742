#include "vanet/road_network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vanet {

namespace {

constexpr std::array<NodeId, 4> kNoNodes = {kNone, kNone, kNone, kNone};

int idx(Heading h) { return static_cast<int>(h); }

}  // namespace

RoadNetwork::RoadNetwork(int n, double segment_length) : n_(n), length_(segment_length) {
  if (n < 2) {
    throw std::invalid_argument("grid dimension must be >= 2, got " + std::to_string(n));
  }
  if (!(segment_length > 0.0) || !std::isfinite(segment_length)) {
    throw std::invalid_argument("segment length must be positive and finite");
  }
  const double L = segment_length;

  nodes_.reserve(static_cast<std::size_t>(n) * n + 4 * static_cast<std::size_t>(n));
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      nodes_.push_back(Node{NodeKind::Intersection, {col * L, row * L}, col, row});
    }
  }
  for (Side side : {Side::West, Side::East, Side::South, Side::North}) {
    for (int road = 0; road < n; ++road) {
      Point2 pos;
      switch (side) {
        case Side::West: pos = {-L, road * L}; break;
        case Side::East: pos = {n * L, road * L}; break;
        case Side::South: pos = {road * L, -L}; break;
        case Side::North: pos = {road * L, n * L}; break;
      }
      Node node{NodeKind::Endpoint, pos};
      node.side = side;
      node.road = road;
      endpoint_ids_.push_back(static_cast<NodeId>(nodes_.size()));
      nodes_.push_back(node);
    }
  }

  neighbor_.assign(nodes_.size(), kNoNodes);
  out_.assign(nodes_.size(), kNoNodes);
  in_.assign(nodes_.size(), kNoNodes);

  const auto segs = static_cast<std::size_t>(2 * n * (n + 1));
  segments_.reserve(segs);
  lanes_.reserve(2 * segs);
  for (int row = 0; row < n; ++row) {
    std::vector<NodeId> chain{endpoint(Side::West, row)};
    for (int col = 0; col < n; ++col) chain.push_back(intersection(col, row));
    chain.push_back(endpoint(Side::East, row));
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      add_segment(chain[k], chain[k + 1], Axis::Horizontal, row);
    }
  }
  for (int col = 0; col < n; ++col) {
    std::vector<NodeId> chain{endpoint(Side::South, col)};
    for (int row = 0; row < n; ++row) chain.push_back(intersection(col, row));
    chain.push_back(endpoint(Side::North, col));
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      add_segment(chain[k], chain[k + 1], Axis::Vertical, col);
    }
  }
}

SegmentId RoadNetwork::add_segment(NodeId a, NodeId b, Axis axis, int road) {
  const auto id = static_cast<SegmentId>(segments_.size());
  const bool peripheral = is_endpoint(a) || is_endpoint(b);
  const Heading fwd = axis == Axis::Horizontal ? Heading::East : Heading::North;
  const Heading bwd = reverse(fwd);
  const auto forward = static_cast<LaneId>(lanes_.size());
  lanes_.push_back(Lane{a, b, id, fwd, nodes_[a].pos, nodes_[b].pos});
  const auto backward = static_cast<LaneId>(lanes_.size());
  lanes_.push_back(Lane{b, a, id, bwd, nodes_[b].pos, nodes_[a].pos});
  segments_.push_back(Segment{a, b, axis, road,
                              peripheral ? SegmentClass::Peripheral : SegmentClass::Central,
                              forward, backward});
  neighbor_[a][idx(fwd)] = b;
  neighbor_[b][idx(bwd)] = a;
  out_[a][idx(fwd)] = forward;
  in_[b][idx(fwd)] = forward;
  out_[b][idx(bwd)] = backward;
  in_[a][idx(bwd)] = backward;
  return id;
}

const Node& RoadNetwork::node(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw std::out_of_range("unknown node id " + std::to_string(id));
  }
  return nodes_[id];
}

const Segment& RoadNetwork::segment(SegmentId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= segments_.size()) {
    throw std::out_of_range("unknown segment id " + std::to_string(id));
  }
  return segments_[id];
}

const Lane& RoadNetwork::lane(LaneId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= lanes_.size()) {
    throw std::out_of_range("unknown lane id " + std::to_string(id));
  }
  return lanes_[id];
}

NodeId RoadNetwork::intersection(int col, int row) const {
  if (col < 0 || col >= n_ || row < 0 || row >= n_) {
    throw std::out_of_range("intersection index out of range");
  }
  return row * n_ + col;
}

NodeId RoadNetwork::endpoint(Side side, int road) const {
  if (road < 0 || road >= n_) throw std::out_of_range("road index out of range");
  return n_ * n_ + static_cast<int>(side) * n_ + road;
}

NodeId RoadNetwork::neighbor(NodeId id, Heading h) const {
  node(id);
  return neighbor_[id][idx(h)];
}

LaneId RoadNetwork::outgoing(NodeId id, Heading h) const {
  node(id);
  return out_[id][idx(h)];
}

LaneId RoadNetwork::incoming(NodeId id, Heading h) const {
  node(id);
  return in_[id][idx(h)];
}

LaneId RoadNetwork::entry_lane(NodeId ep) const {
  if (!is_endpoint(ep)) throw std::invalid_argument("not an endpoint");
  for (Heading h : kHeadings) {
    if (out_[ep][idx(h)] != kNone) return out_[ep][idx(h)];
  }
  throw std::logic_error("endpoint without entry lane");
}

LaneId RoadNetwork::exit_lane(NodeId ep) const {
  if (!is_endpoint(ep)) throw std::invalid_argument("not an endpoint");
  for (Heading h : kHeadings) {
    if (in_[ep][idx(h)] != kNone) return in_[ep][idx(h)];
  }
  throw std::logic_error("endpoint without exit lane");
}

namespace {
Side opposite(Side s) {
  switch (s) {
    case Side::West: return Side::East;
    case Side::East: return Side::West;
    case Side::South: return Side::North;
    case Side::North: return Side::South;
  }
  return s;
}
}  // namespace

NodeId RoadNetwork::opposite_endpoint(NodeId ep) const {
  const Node& nd = node(ep);
  if (nd.kind != NodeKind::Endpoint) throw std::invalid_argument("not an endpoint");
  return endpoint(opposite(nd.side), nd.road);
}

std::vector<NodeId> RoadNetwork::opposite_side_endpoints(NodeId ep) const {
  const Node& nd = node(ep);
  if (nd.kind != NodeKind::Endpoint) throw std::invalid_argument("not an endpoint");
  std::vector<NodeId> out;
  out.reserve(n_);
  for (int road = 0; road < n_; ++road) out.push_back(endpoint(opposite(nd.side), road));
  return out;
}

Point2 RoadNetwork::plane_coords(LanePosition p) const {
  const Lane& ln = lane(p.lane);
  const double t = std::clamp(p.offset, 0.0, length_) / length_;
  return ln.start + t * (ln.end - ln.start);
}

SegmentClass RoadNetwork::classify_segment(SegmentId id) const { return segment(id).cls; }

std::size_t RoadNetwork::count(SegmentClass cls) const {
  return static_cast<std::size_t>(
      std::count_if(segments_.begin(), segments_.end(),
                    [cls](const Segment& s) { return s.cls == cls; }));
}

bool RoadNetwork::on_network(Point2 p, double tol) const {
  const double L = length_;
  const double lo = -L - tol;
  const double hi = n_ * L + tol;
  for (int k = 0; k < n_; ++k) {
    const double line = k * L;
    if (std::abs(p.y - line) <= tol && p.x >= lo && p.x <= hi) return true;
    if (std::abs(p.x - line) <= tol && p.y >= lo && p.y <= hi) return true;
  }
  return false;
}

}  // namespace vanet
