#pragma once

#include <span>
#include <vector>

#include "vanet/road_network.hpp"

namespace vanet {

struct RoutingParams {
  double reroute_period = 60.0;  // s between route re-evaluations
  double ema_alpha = 0.1;        // smoothing of observed lane speeds
  double turn_penalty = 5.0;     // s added to every turn
};

/// Travel-time router. Lane costs are L / (smoothed mean speed); every
/// refresh recomputes, for each exit endpoint, the cost-to-go of every lane
/// by a reverse Dijkstra over the lane graph (no U-turns).
class Router {
 public:
  Router(const RoadNetwork& net, RoutingParams params, double free_speed);

  /// Feeds one step of per-lane mean speeds; NaN marks an empty lane,
  /// which is observed at free speed.
  void observe(std::span<const double> lane_mean_speed);
  void refresh();

  /// Lane sequence from `from` (inclusive) to the lane ending at `exit`.
  /// Throws std::runtime_error when the exit is unreachable.
  std::vector<LaneId> route(LaneId from, NodeId exit) const;

  double lane_cost(LaneId lane) const;
  double cost_to_go(LaneId lane, NodeId exit) const;
  double smoothed_speed(LaneId lane) const { return speed_.at(lane); }

 private:
  double turn_cost(LaneId from, LaneId to) const;
  std::vector<LaneId> successors(LaneId lane) const;

  const RoadNetwork* net_;
  RoutingParams params_;
  double free_speed_;
  std::vector<double> speed_;
  std::vector<std::vector<double>> to_go_;  // [endpoint index][lane]
};

}  // namespace vanet
