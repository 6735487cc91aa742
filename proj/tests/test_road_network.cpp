#include <doctest.h>

#include <set>
#include <stdexcept>

#include "vanet/road_network.hpp"

using namespace vanet;

TEST_CASE("grid counts") {
  SUBCASE("n=3") {
    const auto net = build_grid(3, 400.0);
    CHECK(net.intersection_count() == 9);
    CHECK(net.endpoints().size() == 12);
    CHECK(net.segments().size() == 24);
    CHECK(net.count(SegmentClass::Peripheral) == 12);
    CHECK(net.count(SegmentClass::Central) == 12);
  }
  SUBCASE("n=10") {
    const auto net = build_grid(10, 400.0);
    CHECK(net.intersection_count() == 100);
    CHECK(net.endpoints().size() == 40);
  }
  SUBCASE("smallest legal grid") {
    const auto net = build_grid(2, 1.0);
    CHECK(net.intersection_count() == 4);
    CHECK(net.endpoints().size() == 8);
    CHECK(net.segments().size() == 12);
    CHECK(net.count(SegmentClass::Peripheral) == 8);
    CHECK(net.count(SegmentClass::Central) == 4);
  }
  for (int n = 2; n <= 12; ++n) {
    const auto net = build_grid(n, 250.0);
    CHECK(net.segments().size() == static_cast<std::size_t>(2 * n * (n + 1)));
    CHECK(net.count(SegmentClass::Peripheral) == static_cast<std::size_t>(4 * n));
    CHECK(net.lanes().size() == 2 * net.segments().size());
  }
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(build_grid(1, 400.0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0, 400.0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(3, -5.0), std::invalid_argument);
}

TEST_CASE("lane geometry") {
  const double L = 400.0;
  const auto net = build_grid(5, L);
  for (const auto& lane : net.lanes()) {
    CHECK(distance(lane.start, lane.end) == doctest::Approx(L));
    CHECK(lane.start == net.node(lane.from).pos);
    CHECK(lane.end == net.node(lane.to).pos);
  }
  for (NodeId ep : net.endpoints()) {
    const LaneId in = net.entry_lane(ep);
    const Point2 start = net.plane_coords({in, 0.0});
    CHECK(start == net.node(ep).pos);
    CHECK(net.lane(net.exit_lane(ep)).to == ep);
  }
}

TEST_CASE("plane coordinates") {
  const double L = 400.0;
  const auto net = build_grid(3, L);
  const NodeId a = net.intersection(0, 0);
  const LaneId east = net.outgoing(a, Heading::East);
  REQUIRE(east != kNone);
  CHECK(net.lane(east).to == net.intersection(1, 0));
  const Point2 mid = net.plane_coords({east, L / 2});
  CHECK(mid.x == doctest::Approx(L / 2));
  CHECK(mid.y == doctest::Approx(0.0));
  const Point2 end = net.plane_coords({east, L});
  CHECK(end == net.node(net.intersection(1, 0)).pos);

  SUBCASE("opposite lanes share the road line") {
    const LaneId west = net.incoming(a, Heading::West);
    REQUIRE(west != kNone);
    CHECK(net.lane(west).segment == net.lane(east).segment);
    for (double off : {0.0, 37.5, 200.0, 399.0}) {
      const Point2 p = net.plane_coords({east, off});
      const Point2 q = net.plane_coords({west, L - off});
      CHECK(distance(p, q) == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  SUBCASE("continuous across an intersection") {
    const LaneId next = net.outgoing(net.intersection(1, 0), Heading::North);
    CHECK(distance(net.plane_coords({east, L}), net.plane_coords({next, 0.0})) == 0.0);
  }
  CHECK_THROWS_AS((void)net.plane_coords({static_cast<LaneId>(net.lanes().size()), 0.0}),
                  std::out_of_range);
}

TEST_CASE("segment classification") {
  const auto net = build_grid(5, 400.0);
  for (SegmentId s = 0; s < static_cast<SegmentId>(net.segments().size()); ++s) {
    const auto& seg = net.segment(s);
    const bool touches = net.is_endpoint(seg.a) || net.is_endpoint(seg.b);
    CHECK((net.classify_segment(s) == SegmentClass::Peripheral) == touches);
  }
  CHECK_THROWS_AS((void)net.classify_segment(-1), std::out_of_range);
  CHECK_THROWS_AS((void)net.classify_segment(static_cast<SegmentId>(net.segments().size())),
                  std::out_of_range);
}

TEST_CASE("adjacency is symmetric") {
  const auto net = build_grid(4, 100.0);
  for (NodeId v = 0; v < static_cast<NodeId>(net.nodes().size()); ++v) {
    for (Heading h : kHeadings) {
      const NodeId w = net.neighbor(v, h);
      if (w == kNone) {
        CHECK(net.outgoing(v, h) == kNone);
        continue;
      }
      CHECK(net.neighbor(w, reverse(h)) == v);
      const LaneId out = net.outgoing(v, h);
      REQUIRE(out != kNone);
      CHECK(net.lane(out).from == v);
      CHECK(net.lane(out).to == w);
      CHECK(net.lane(out).heading == h);
      CHECK(net.incoming(w, h) == out);
    }
  }
}

TEST_CASE("endpoints and destinations") {
  const int n = 5;
  const auto net = build_grid(n, 400.0);
  for (int road = 0; road < n; ++road) {
    const NodeId w = net.endpoint(Side::West, road);
    const NodeId e = net.endpoint(Side::East, road);
    CHECK(net.opposite_endpoint(w) == e);
    CHECK(net.opposite_endpoint(e) == w);
    CHECK(net.node(w).pos.y == net.node(e).pos.y);
    const auto opp = net.opposite_side_endpoints(w);
    CHECK(opp.size() == static_cast<std::size_t>(n));
    for (NodeId o : opp) CHECK(net.node(o).side == Side::East);
  }
  std::set<NodeId> seen(net.endpoints().begin(), net.endpoints().end());
  CHECK(seen.size() == static_cast<std::size_t>(4 * n));
  // Endpoints sit one segment beyond the outer intersections.
  CHECK(net.node(net.endpoint(Side::West, 0)).pos == Point2{-400.0, 0.0});
  CHECK(net.node(net.endpoint(Side::North, 2)).pos == Point2{800.0, 2000.0});
}

TEST_CASE("on_network") {
  const auto net = build_grid(3, 400.0);
  CHECK(net.on_network({123.0, 400.0}));
  CHECK(net.on_network({800.0, -250.0}));
  CHECK(net.on_network({-400.0, 0.0}));
  CHECK_FALSE(net.on_network({123.0, 456.0}));
  CHECK_FALSE(net.on_network({-401.0, 0.0}));
  CHECK_FALSE(net.on_network({0.0, 1200.5}));
}
