#include "vanet/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vanet/csv.hpp"
#include "vanet/parallel.hpp"

namespace vanet {

namespace {

constexpr double kStoppedSpeed = 0.1;
constexpr double kQueueSpeed = 1.0;  // below this a downstream tail counts as standing
constexpr double kOverlapTolerance = 1e-9;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

DestinationPolicy parse_destination(std::string_view s) {
  if (s == "A") return DestinationPolicy::AntiDiametric;
  if (s == "R") return DestinationPolicy::Random;
  throw std::invalid_argument("unknown destination policy '" + std::string(s) +
                              "' (expected A or R)");
}

std::string_view to_string(DestinationPolicy d) {
  return d == DestinationPolicy::AntiDiametric ? "A" : "R";
}

void SimConfig::validate() const {
  require(grid_n >= 2, "grid_n must be >= 2");
  require(segment_length > 0.0, "segment_length must be positive");
  require(flow >= 0.0 && std::isfinite(flow), "flow must be >= 0");
  require(rho > 0.0 && rho <= 1.0, "rho must lie in (0, 1]");
  require(dt > 0.0, "dt must be positive");
  require(duration > 0.0, "duration must be positive");
  require(warmup >= 0.0 && warmup < duration, "warmup must lie in [0, duration)");
  require(cycle > 0.0 && green_horizontal > 0.0 && green_horizontal < cycle,
          "signal timing needs 0 < green_horizontal < cycle");
  require(driver.v_max > 0.0 && driver.accel > 0.0 && driver.decel > 0.0,
          "driver speeds and accelerations must be positive");
  require(driver.length > 0.0 && driver.min_gap >= 0.0, "vehicle length must be positive");
  require(driver.sigma >= 0.0 && driver.sigma <= 1.0, "sigma must lie in [0, 1]");
  require(driver.turn_speed > 0.0 && driver.yield_window >= 0.0, "invalid turn/yield settings");
  require(routing.reroute_period > 0.0, "reroute_period must be positive");
  require(routing.ema_alpha > 0.0 && routing.ema_alpha <= 1.0, "ema_alpha must lie in (0, 1]");
  require(routing.turn_penalty >= 0.0, "turn_penalty must be >= 0");
}

std::vector<Arrival> spawn_arrivals(const SimConfig& cfg, const RoadNetwork& net, double t,
                                    std::mt19937_64& rng, std::uint64_t& next_id) {
  std::vector<Arrival> out;
  if (cfg.flow <= 0.0) return out;
  std::poisson_distribution<int> count(cfg.flow / 3600.0 * cfg.dt);
  const auto n = static_cast<std::size_t>(net.n());
  for (NodeId ep : net.endpoints()) {
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
      Arrival a;
      a.id = next_id++;
      a.entry = ep;
      a.time = t;
      if (cfg.destination == DestinationPolicy::AntiDiametric) {
        a.exit = net.opposite_endpoint(ep);
      } else {
        const auto choices = net.opposite_side_endpoints(ep);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        a.exit = choices[pick(rng)];
      }
      a.equipped = equipment_draw(cfg.seed, a.id) < cfg.rho;
      out.push_back(a);
    }
  }
  return out;
}

double equipment_draw(std::uint64_t seed, std::uint64_t id) {
  return static_cast<double>(derive_seed(seed ^ 0x65717569702d7268ULL, id) >> 11) * 0x1.0p-53;
}

double safe_speed(double gap, double leader_speed, double decel, double tau) {
  const double g = std::max(gap, 0.0);
  const double bt = decel * tau;
  return -bt + std::sqrt(bt * bt + leader_speed * leader_speed + 2.0 * decel * g);
}

Simulator::Simulator(SimConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      net_(cfg_.grid_n, cfg_.segment_length),
      plan_(make_signal_plan(net_, cfg_.regime, cfg_.cycle, cfg_.green_horizontal,
                             cfg_.driver.v_max)),
      router_(net_, cfg_.routing, cfg_.driver.v_max),
      rng_(cfg_.seed),
      next_refresh_(cfg_.routing.reroute_period),
      lanes_(net_.lanes().size()),
      queues_(net_.endpoint_count()),
      views_(net_.intersection_count()),
      last_crossing_(net_.intersection_count()) {}

std::size_t Simulator::vehicle_count() const {
  std::size_t n = 0;
  for (const auto& q : lanes_) n += q.size();
  return n;
}

std::size_t Simulator::queued() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

double Simulator::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

void Simulator::run_until(double t) {
  while (time() + 0.5 * cfg_.dt <= t) step();
}

void Simulator::step() {
  const double t = time();
  if (t + 0.5 * cfg_.dt >= next_refresh_) {
    router_.refresh();
    next_refresh_ += cfg_.routing.reroute_period;
  }
  admit_arrivals();
  reroute_due();
  if (plan_.regime == Regime::NoLights) {
    for (std::size_t i = 0; i < views_.size(); ++i) views_[i] = junction_view(static_cast<NodeId>(i));
  }
  plan_speeds();
  move_vehicles();
  insert_from_queues();
  ++step_;
  update_observations();
  check_invariants();
}

void Simulator::admit_arrivals() {
  auto arrivals = spawn_arrivals(cfg_, net_, time(), rng_, next_id_);
  counters_.arrived += arrivals.size();
  for (auto& a : arrivals) {
    queues_[static_cast<std::size_t>(a.entry) - net_.intersection_count()].push_back(a);
  }
}

void Simulator::reroute_due() {
  const double t = time();
  const auto& d = cfg_.driver;
  for (std::size_t l = 0; l < lanes_.size(); ++l) {
    const LaneId lane = static_cast<LaneId>(l);
    if (net_.is_endpoint(net_.lane(lane).to)) continue;
    for (auto& v : lanes_[l]) {
      if (t - v.last_route_time + 1e-9 < cfg_.routing.reroute_period) continue;
      v.last_route_time = t;
      const double to_line = cfg_.segment_length - v.position.offset;
      const double commit = v.speed * v.speed / (2.0 * d.decel) + v.speed * cfg_.dt + d.length;
      const LaneId next = v.next_lane();
      std::vector<LaneId> fresh;
      if (next != kNone && to_line < commit) {
        fresh = {lane};
        if (net_.lane(next).to == v.destination) {
          fresh.push_back(next);
        } else {
          const auto tail = router_.route(next, v.destination);
          fresh.insert(fresh.end(), tail.begin(), tail.end());
        }
      } else {
        fresh = router_.route(lane, v.destination);
      }
      v.route = std::move(fresh);
      v.route_index = 0;
    }
  }
}

JunctionView Simulator::junction_view(NodeId intersection) const {
  JunctionView view;
  const auto& d = cfg_.driver;
  const double L = cfg_.segment_length;
  for (Heading h : kHeadings) {
    const LaneId in = net_.incoming(intersection, h);
    if (in != kNone && !lanes_[in].empty()) {
      const auto& front = lanes_[in].front();
      const double dist = L - front.position.offset;
      const auto hi = static_cast<int>(h);
      // Travel time to the box, so a car held at its own line does not count.
      view.approaching[hi] = dist <= front.speed * d.yield_window;
      view.waiting[hi] = front.stopped_for;
    }
    const LaneId out = net_.outgoing(intersection, h);
    if (out != kNone && !lanes_[out].empty() && lanes_[out].back().position.offset < d.length) {
      view.box_occupied[static_cast<int>(axis_of(h))] = true;
    }
  }
  return view;
}

void Simulator::plan_speeds() {
  const auto& d = cfg_.driver;
  const double dt = cfg_.dt;
  const double L = cfg_.segment_length;
  const double t = time();
  for (std::size_t l = 0; l < lanes_.size(); ++l) {
    auto& q = lanes_[l];
    const Lane& ln = net_.lane(static_cast<LaneId>(l));
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto& v = q[i];
      double cap = std::min(v.speed + d.accel * dt, d.v_max);
      v.gate = Gate::Go;
      if (i > 0) {
        const auto& leader = q[i - 1];
        const double gap = leader.position.offset - d.length - v.position.offset - d.min_gap;
        cap = std::min(cap, safe_speed(gap, leader.speed, d.decel, dt));
      } else if (const LaneId next = v.next_lane(); next != kNone) {
        const NodeId inter = ln.to;
        const double to_line = L - v.position.offset;
        Gate gate = intersection_gate(plan_, inter, ln.heading, t,
                                      plan_.regime == Regime::NoLights ? views_[inter]
                                                                       : JunctionView{});
        if (gate == Gate::Stop && plan_.regime == Regime::NoLights) {
          // A driver who can no longer stop comfortably keeps going unless
          // the box itself is taken by crossing traffic.
          const Axis cross = axis_of(rotate_left(ln.heading));
          const bool box = views_[inter].box_occupied[static_cast<int>(cross)];
          if (!box && v.speed * v.speed / (2.0 * d.decel) > to_line) gate = Gate::Go;
        }
        const auto& nq = lanes_[next];
        if (!nq.empty()) {
          const auto& tail = nq.back();
          const double room = tail.position.offset + tail.speed * dt - d.length - d.min_gap;
          // Do not enter the box behind a standing queue that leaves no room.
          if (room < d.length && tail.speed < kQueueSpeed) gate = Gate::Stop;
          cap = std::min(cap, safe_speed(to_line + tail.position.offset - d.length - d.min_gap,
                                         tail.speed, d.decel, dt));
        }
        if (gate == Gate::Stop) cap = std::min(cap, safe_speed(to_line, 0.0, d.decel, dt));
        if (net_.lane(next).heading != ln.heading) {
          const double slack = std::max(0.0, to_line - d.turn_speed * dt);
          cap = std::min(cap, std::sqrt(d.turn_speed * d.turn_speed + 2.0 * d.decel * slack));
        }
        v.gate = gate;
      }
      const double dawdle = d.sigma * d.accel * dt * uniform();
      v.next_speed = std::max(0.0, cap - dawdle);
    }
  }
}

void Simulator::move_vehicles() {
  const auto& d = cfg_.driver;
  const double dt = cfg_.dt;
  const double L = cfg_.segment_length;
  const double t = time();
  for (std::size_t l = 0; l < lanes_.size(); ++l) {
    auto& q = lanes_[l];
    const Lane& ln = net_.lane(static_cast<LaneId>(l));
    std::size_t i = 0;
    while (i < q.size()) {
      auto& v = q[i];
      if (v.moved_step == step_) break;
      const double old = v.position.offset;
      double pos = old + v.next_speed * dt;
      const LaneId next = v.next_lane();
      if (i > 0) {
        pos = std::min(pos, q[i - 1].position.offset - d.length);
      } else if (next != kNone) {
        const NodeId inter = ln.to;
        if (v.gate == Gate::Stop) pos = std::min(pos, L);
        if (pos > L && plan_.regime == Regime::NoLights) {
          const auto& last = last_crossing_[inter];
          if (last.step == step_ && last.axis != axis_of(ln.heading)) pos = L;
        }
        const auto& nq = lanes_[next];
        if (!nq.empty()) pos = std::min(pos, L + nq.back().position.offset - d.length);
      }
      pos = std::max(pos, old);
      v.speed = std::min(v.next_speed, (pos - old) / dt);
      v.moved_step = step_;

      if (pos > L) {
        if (next == kNone) {
          ++counters_.exited;
          q.pop_front();
          continue;
        }
        VehicleState moved = std::move(v);
        q.pop_front();
        moved.position = {next, pos - L};
        ++moved.route_index;
        const NodeId inter = ln.to;
        last_crossing_[inter] = {step_, axis_of(ln.heading)};
        if (cfg_.record_crossings) {
          crossings_.push_back({t, inter, ln.heading, net_.lane(next).heading});
        }
        lanes_[next].push_back(std::move(moved));
        continue;
      }
      v.position.offset = pos;
      ++i;
    }
  }
}

void Simulator::insert_from_queues() {
  const auto& d = cfg_.driver;
  const double t = time();
  const auto endpoints = net_.endpoints();
  for (std::size_t k = 0; k < queues_.size(); ++k) {
    auto& waiting = queues_[k];
    if (waiting.empty()) continue;
    const LaneId lane = net_.entry_lane(endpoints[k]);
    auto& q = lanes_[lane];
    double speed = d.v_max;
    if (!q.empty()) {
      const auto& tail = q.back();
      const double gap = tail.position.offset - d.length - d.min_gap;
      if (gap < 0.0) {
        ++counters_.blocked_insertions;
        continue;
      }
      speed = std::min(speed, safe_speed(gap, tail.speed, d.decel, cfg_.dt));
    }
    const Arrival a = waiting.front();
    waiting.pop_front();
    VehicleState v;
    v.id = a.id;
    v.position = {lane, 0.0};
    v.speed = speed;
    v.route = router_.route(lane, a.exit);
    v.destination = a.exit;
    v.equipped = a.equipped;
    v.entry_time = a.time;
    v.last_route_time = t;
    v.moved_step = step_;
    q.push_back(std::move(v));
    ++counters_.inserted;
  }
}

void Simulator::update_observations() {
  std::vector<double> mean(lanes_.size(), std::nan(""));
  for (std::size_t l = 0; l < lanes_.size(); ++l) {
    const auto& q = lanes_[l];
    if (q.empty()) continue;
    double s = 0.0;
    for (const auto& v : q) s += v.speed;
    mean[l] = s / static_cast<double>(q.size());
  }
  router_.observe(mean);
  for (auto& q : lanes_) {
    for (auto& v : q) v.stopped_for = v.speed < kStoppedSpeed ? v.stopped_for + cfg_.dt : 0.0;
  }
}

void Simulator::check_invariants() const {
  const auto& d = cfg_.driver;
  for (std::size_t l = 0; l < lanes_.size(); ++l) {
    const auto& q = lanes_[l];
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto& v = q[i];
      if (v.route.at(v.route_index) != static_cast<LaneId>(l)) {
        throw std::logic_error("vehicle " + std::to_string(v.id) + " left its route");
      }
      if (v.speed < 0.0 || v.speed > d.v_max + 1e-9) {
        throw std::logic_error("vehicle " + std::to_string(v.id) + " speed out of range");
      }
      if (i > 0 && q[i - 1].position.offset - d.length - v.position.offset < -kOverlapTolerance) {
        throw std::logic_error("vehicles " + std::to_string(q[i - 1].id) + " and " +
                               std::to_string(v.id) + " overlap on lane " + std::to_string(l));
      }
    }
  }
}

const VehicleState& Simulator::add_vehicle(LanePosition pos, double speed, NodeId destination,
                                           std::vector<LaneId> route, bool equipped) {
  (void)net_.lane(pos.lane);  // range check
  const auto& d = cfg_.driver;
  if (pos.offset < 0.0 || pos.offset > cfg_.segment_length) {
    throw std::invalid_argument("offset outside the lane");
  }
  if (speed < 0.0 || speed > d.v_max) throw std::invalid_argument("speed outside [0, v_max]");
  if (route.empty()) {
    route = router_.route(pos.lane, destination);
  } else {
    if (route.front() != pos.lane) throw std::invalid_argument("route must start at the lane");
    destination = net_.lane(route.back()).to;
  }
  if (!net_.is_endpoint(destination)) throw std::invalid_argument("destination must be an endpoint");
  
  auto& q = lanes_[pos.lane];
  auto it = std::find_if(q.begin(), q.end(), [&](const VehicleState& o) {
    return o.position.offset < pos.offset;
  });
  if (it != q.begin() && std::prev(it)->position.offset - d.length < pos.offset) {
    throw std::invalid_argument("vehicle overlaps its leader");
  }
  if (it != q.end() && pos.offset - d.length < it->position.offset) {
    throw std::invalid_argument("vehicle overlaps its follower");
  }
  VehicleState v;
  v.id = next_id_++;
  v.position = pos;
  v.speed = speed;
  v.route = std::move(route);
  v.destination = destination;
  v.equipped = equipped;
  v.entry_time = time();
  v.last_route_time = time();
  ++counters_.arrived;
  ++counters_.inserted;
  return *q.insert(it, std::move(v));
}

DensitySample Simulator::measure_density() const {
  DensitySample s;
  s.time = time();
  std::size_t central = 0;
  std::size_t peripheral = 0;
  for (std::size_t l = 0; l < lanes_.size(); ++l) {
    const auto cls = net_.classify_segment(net_.lane(static_cast<LaneId>(l)).segment);
    (cls == SegmentClass::Central ? central : peripheral) += lanes_[l].size();
  }
  const double km = cfg_.segment_length / 1000.0;
  const auto nc = static_cast<double>(net_.count(SegmentClass::Central));
  const auto np = static_cast<double>(net_.count(SegmentClass::Peripheral));
  s.lambda_central = nc > 0 ? static_cast<double>(central) / (nc * km) : 0.0;
  s.lambda_peripheral = static_cast<double>(peripheral) / (np * km);
  s.lambda_network = static_cast<double>(central + peripheral) / ((nc + np) * km);
  s.n_total = central + peripheral;
  return s;
}

std::optional<double> Simulator::mean_speed() const {
  double sum = 0.0;
  std::size_t n = 0;
  for_each_vehicle([&](const VehicleState& v) {
    sum += v.speed;
    ++n;
  });
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

ConnectivitySnapshot Simulator::equipped_snapshot(double range) const {
  ConnectivitySnapshot snap;
  snap.time = time();
  snap.range = range;
  for_each_vehicle([&](const VehicleState& v) {
    if (v.equipped) snap.nodes.push_back({v.id, net_.plane_coords(v.position)});
  });
  return snap;
}

ConnectivitySnapshot thin_by_penetration(const Simulator& sim, double rho, double range) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
  ConnectivitySnapshot snap;
  snap.time = sim.time();
  snap.range = range;
  const std::uint64_t seed = sim.config().seed;
  sim.for_each_vehicle([&](const VehicleState& v) {
    if (equipment_draw(seed, v.id) < rho) {
      snap.nodes.push_back({v.id, sim.network().plane_coords(v.position)});
    }
  });
  return snap;
}

std::vector<std::string> vehicle_snapshot_header() {
  return {"time", "id", "x", "y", "speed", "equipped"};
}

void write_vehicle_snapshot(CsvWriter& out, const Simulator& sim) {
  const std::string t = format_double(sim.time());
  sim.for_each_vehicle([&](const VehicleState& v) {
    const Point2 p = sim.network().plane_coords(v.position);
    out.row({t, std::to_string(v.id), format_double(p.x), format_double(p.y),
             format_double(v.speed), v.equipped ? "1" : "0"});
  });
}

}  // namespace vanet
