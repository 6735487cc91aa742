#include "vanet/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace vanet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinSpeed = 0.1;

std::size_t endpoint_index(const RoadNetwork& net, NodeId exit) {
  if (!net.is_endpoint(exit)) throw std::invalid_argument("route target is not an endpoint");
  return static_cast<std::size_t>(exit) - net.intersection_count();
}
}  // namespace

Router::Router(const RoadNetwork& net, RoutingParams params, double free_speed)
    : net_(&net), params_(params), free_speed_(free_speed), speed_(net.lanes().size(), free_speed) {
  refresh();
}

void Router::observe(std::span<const double> lane_mean_speed) {
  const double a = params_.ema_alpha;
  for (std::size_t l = 0; l < speed_.size(); ++l) {
    const double obs = std::isnan(lane_mean_speed[l]) ? free_speed_ : lane_mean_speed[l];
    speed_[l] = (1.0 - a) * speed_[l] + a * obs;
  }
}

double Router::lane_cost(LaneId lane) const {
  return net_->segment_length() / std::max(speed_.at(lane), kMinSpeed);
}

double Router::turn_cost(LaneId from, LaneId to) const {
  return net_->lane(from).heading == net_->lane(to).heading ? 0.0 : params_.turn_penalty;
}

std::vector<LaneId> Router::successors(LaneId lane) const {
  std::vector<LaneId> out;
  const Lane& ln = net_->lane(lane);
  if (net_->is_endpoint(ln.to)) return out;
  for (Heading h : kHeadings) {
    const LaneId s = net_->outgoing(ln.to, h);
    if (s != kNone && net_->lane(s).to != ln.from) out.push_back(s);
  }
  return out;
}

void Router::refresh() {
  const auto& net = *net_;
  const std::size_t lanes = net.lanes().size();
  to_go_.assign(net.endpoint_count(), std::vector<double>(lanes, kInf));
  using Item = std::pair<double, LaneId>;
  for (NodeId exit : net.endpoints()) {
    auto& dist = to_go_[endpoint_index(net, exit)];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    const LaneId last = net.exit_lane(exit);
    dist[last] = lane_cost(last);
    pq.emplace(dist[last], last);
    while (!pq.empty()) {
      const auto [d, s] = pq.top();
      pq.pop();
      if (d > dist[s]) continue;
      const Lane& sl = net.lane(s);
      if (net.is_endpoint(sl.from)) continue;
      for (Heading h : kHeadings) {
        const LaneId p = net.incoming(sl.from, h);
        if (p == kNone || net.lane(p).from == sl.to) continue;
        const double cand = lane_cost(p) + turn_cost(p, s) + d;
        if (cand < dist[p]) {
          dist[p] = cand;
          pq.emplace(cand, p);
        }
      }
    }
  }
}

double Router::cost_to_go(LaneId lane, NodeId exit) const {
  return to_go_.at(endpoint_index(*net_, exit)).at(lane);
}

std::vector<LaneId> Router::route(LaneId from, NodeId exit) const {
  const auto& dist = to_go_.at(endpoint_index(*net_, exit));
  if (!std::isfinite(dist.at(from))) throw std::runtime_error("exit unreachable from lane");
  std::vector<LaneId> path{from};
  LaneId cur = from;
  const std::size_t limit = net_->lanes().size();
  while (net_->lane(cur).to != exit) {
    LaneId best = kNone;
    double best_cost = kInf;
    for (LaneId s : successors(cur)) {
      const double c = turn_cost(cur, s) + dist[s];
      if (c < best_cost) {
        best_cost = c;
        best = s;
      }
    }
    if (best == kNone || path.size() > limit) throw std::runtime_error("routing failed");
    path.push_back(best);
    cur = best;
  }
  return path;
}

}  // namespace vanet
