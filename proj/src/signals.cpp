#include "vanet/signals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vanet {

Regime parse_regime(std::string_view s) {
  if (s == "NL") return Regime::NoLights;
  if (s == "SL") return Regime::Synchronized;
  if (s == "GW") return Regime::GreenWave;
  throw std::invalid_argument("unknown regime '" + std::string(s) + "' (expected NL, SL or GW)");
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::NoLights: return "NL";
    case Regime::Synchronized: return "SL";
    case Regime::GreenWave: return "GW";
  }
  return "?";
}

bool SignalPlan::axis_green(NodeId intersection, Axis axis, double t) const {
  const double phase = std::fmod(std::fmod(t - offsets.at(intersection), cycle) + cycle, cycle);
  const bool horizontal = phase < green_horizontal;
  return axis == Axis::Horizontal ? horizontal : !horizontal;
}

SignalPlan make_signal_plan(const RoadNetwork& net, Regime regime, double cycle,
                            double green_horizontal, double v_max) {
  if (!(cycle > 0.0) || !(green_horizontal > 0.0) || !(green_horizontal < cycle)) {
    throw std::invalid_argument("signal timing needs 0 < green_horizontal < cycle");
  }
  if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
  SignalPlan plan;
  plan.regime = regime;
  plan.cycle = cycle;
  plan.green_horizontal = green_horizontal;
  plan.green_vertical = cycle - green_horizontal;
  plan.offsets.assign(net.intersection_count(), 0.0);
  if (regime == Regime::GreenWave) {
    const double step = net.segment_length() / v_max;
    for (const auto& nd : net.nodes()) {
      if (nd.kind != NodeKind::Intersection) continue;
      plan.offsets[net.intersection(nd.col, nd.row)] = std::fmod(nd.col * step, cycle);
    }
  }
  return plan;
}

Gate intersection_gate(const SignalPlan& plan, NodeId intersection, Heading approach, double t,
                       const JunctionView& view) {
  const Axis axis = axis_of(approach);
  if (plan.regime != Regime::NoLights) {
    return plan.axis_green(intersection, axis, t) ? Gate::Go : Gate::Stop;
  }
  const Axis cross = axis == Axis::Horizontal ? Axis::Vertical : Axis::Horizontal;
  if (view.box_occupied[static_cast<int>(cross)]) return Gate::Stop;

  const auto right = static_cast<int>(heading_from_right(approach));
  if (!view.approaching[right]) return Gate::Go;

  bool all = true;
  for (bool a : view.approaching) all = all && a;
  if (!all) return Gate::Stop;

  int winner = 0;
  for (int h = 1; h < 4; ++h) {
    if (view.waiting[h] > view.waiting[winner]) winner = h;
  }
  return winner == static_cast<int>(approach) ? Gate::Go : Gate::Stop;
}

}  // namespace vanet
