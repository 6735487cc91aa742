#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vanet/connectivity.hpp"
#include "vanet/road_network.hpp"
#include "vanet/routing.hpp"
#include "vanet/signals.hpp"

namespace vanet {

class CsvWriter;

enum class DestinationPolicy { AntiDiametric, Random };

DestinationPolicy parse_destination(std::string_view s);  // "A" or "R"
std::string_view to_string(DestinationPolicy d);

/// Krauss-style driver. Defaults follow common urban microsimulation
/// settings (50 km/h limit, 5 m cars, 2.5 m standstill gap).
struct DriverParams {
  double v_max = 13.9;        // m/s
  double accel = 2.6;         // m/s^2
  double decel = 4.5;         // m/s^2
  double length = 5.0;        // m
  double min_gap = 2.5;       // m
  double sigma = 0.5;         // driver imperfection in [0, 1]
  double turn_speed = 5.0;    // m/s when crossing into a perpendicular lane
  double yield_window = 2.0;  // s, right-of-way horizon at uncontrolled junctions
};

struct SimConfig {
  int grid_n = 5;
  double segment_length = 400.0;
  double flow = 400.0;  // vehicles per hour per entry endpoint
  Regime regime = Regime::NoLights;
  DestinationPolicy destination = DestinationPolicy::AntiDiametric;
  double rho = 1.0;
  double dt = 1.0;
  double duration = 999.0;
  double warmup = 300.0;
  std::uint64_t seed = 1;
  double cycle = 60.0;
  double green_horizontal = 30.0;
  DriverParams driver;
  RoutingParams routing;
  bool record_crossings = false;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

/// A vehicle generated at an entry endpoint, before it is on the road.
struct Arrival {
  std::uint64_t id = 0;
  NodeId entry = kNone;
  NodeId exit = kNone;
  bool equipped = true;
  double time = 0.0;
};

struct VehicleState {
  std::uint64_t id = 0;
  LanePosition position;  // offset of the front bumper
  double speed = 0.0;
  std::vector<LaneId> route;
  std::size_t route_index = 0;  // route[route_index] == position.lane
  NodeId destination = kNone;
  bool equipped = true;
  double entry_time = 0.0;
  double last_route_time = 0.0;
  double stopped_for = 0.0;

  // Per-step scratch state.
  double next_speed = 0.0;
  Gate gate = Gate::Go;
  std::uint64_t moved_step = ~std::uint64_t{0};

  LaneId next_lane() const {
    return route_index + 1 < route.size() ? route[route_index + 1] : kNone;
  }
};

struct DensitySample {
  double time = 0.0;
  double lambda_central = 0.0;     // vehicles/km per road, both directions
  double lambda_peripheral = 0.0;  // vehicles/km per road, both directions
  double lambda_network = 0.0;     // vehicles/km over all segments
  std::size_t n_total = 0;
};

struct TrafficCounters {
  std::uint64_t arrived = 0;   // generated at endpoints
  std::uint64_t inserted = 0;  // placed on an entry lane
  std::uint64_t exited = 0;
  std::uint64_t blocked_insertions = 0;  // steps an entry queue could not insert
};

struct CrossingEvent {
  double time = 0.0;
  NodeId intersection = kNone;
  Heading from = Heading::East;
  Heading to = Heading::East;
};

/// Uniform [0, 1) draw tied to a vehicle id. A vehicle is equipped iff its
/// draw is below rho, so lowering rho only ever removes vehicles.
double equipment_draw(std::uint64_t seed, std::uint64_t id);

/// Poisson(flow * dt) arrivals at every entry endpoint for the step starting
/// at t, with destinations per policy and Bernoulli(rho) equipment. Ids are
/// drawn from `next_id`.
std::vector<Arrival> spawn_arrivals(const SimConfig& cfg, const RoadNetwork& net, double t,
                                    std::mt19937_64& rng, std::uint64_t& next_id);

/// Krauss safe speed for a follower with `gap` meters to a leader moving at
/// `leader_speed`, both able to brake at `decel` within reaction time `tau`.
double safe_speed(double gap, double leader_speed, double decel, double tau);

/// Discrete-time microscopic simulation on the grid. Strictly sequential;
/// identical config and seed give identical trajectories.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg);
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Advances one time step. Throws std::logic_error if two vehicles on a
  /// lane ever overlap.
  void step();
  void run_until(double t);

  double time() const { return static_cast<double>(step_) * cfg_.dt; }
  std::uint64_t steps() const { return step_; }
  const SimConfig& config() const { return cfg_; }
  const RoadNetwork& network() const { return net_; }
  const SignalPlan& signals() const { return plan_; }
  const Router& router() const { return router_; }

  /// Vehicles per lane, front (largest offset) first.
  std::span<const std::deque<VehicleState>> lanes() const { return lanes_; }
  std::size_t vehicle_count() const;
  std::size_t queued() const;
  const TrafficCounters& counters() const { return counters_; }
  std::span<const CrossingEvent> crossings() const { return crossings_; }

  template <typename Fn>
  void for_each_vehicle(Fn&& fn) const {
    for (const auto& lane : lanes_) {
      for (const auto& v : lane) fn(v);
    }
  }

  /// Places a vehicle directly on the road (tests, tools). The route must
  /// start with the vehicle's lane; an empty route is replaced by the
  /// router's choice towards `destination`.
  const VehicleState& add_vehicle(LanePosition pos, double speed, NodeId destination,
                                  std::vector<LaneId> route = {}, bool equipped = true);

  DensitySample measure_density() const;
  std::optional<double> mean_speed() const;

  /// Equipped vehicles as graph nodes at their plane coordinates.
  ConnectivitySnapshot equipped_snapshot(double range) const;

 private:
  void admit_arrivals();
  void reroute_due();
  void plan_speeds();
  void move_vehicles();
  void insert_from_queues();
  void update_observations();
  void check_invariants() const;

  JunctionView junction_view(NodeId intersection) const;
  double uniform();

  SimConfig cfg_;
  RoadNetwork net_;
  SignalPlan plan_;
  Router router_;
  std::mt19937_64 rng_;
  std::uint64_t step_ = 0;
  std::uint64_t next_id_ = 0;
  double next_refresh_ = 0.0;
  std::vector<std::deque<VehicleState>> lanes_;
  std::vector<std::deque<Arrival>> queues_;  // by endpoint index
  std::vector<JunctionView> views_;          // by intersection id, current step
  struct LastCrossing {
    std::uint64_t step = ~std::uint64_t{0};
    Axis axis = Axis::Horizontal;
  };
  std::vector<LastCrossing> last_crossing_;
  TrafficCounters counters_;
  std::vector<CrossingEvent> crossings_;
};

/// Vehicles whose equipment draw is below `rho`, as a connectivity snapshot.
/// With rho at or below the configured penetration this is a subset of the
/// equipped fleet. Throws std::invalid_argument unless 0 < rho <= 1.
ConnectivitySnapshot thin_by_penetration(const Simulator& sim, double rho, double range);

/// Header "time,id,x,y,speed,equipped".
std::vector<std::string> vehicle_snapshot_header();
void write_vehicle_snapshot(CsvWriter& out, const Simulator& sim);

}  // namespace vanet
