#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "vanet/road_network.hpp"

namespace vanet {

/// Intersection control regime: no lights (yield to the right),
/// synchronized lights, or lights offset into a green wave.
enum class Regime { NoLights, Synchronized, GreenWave };

Regime parse_regime(std::string_view s);  // "NL", "SL", "GW"
std::string_view to_string(Regime r);

enum class Gate { Go, Stop };

/// Per-intersection light timing. For each intersection the horizontal axis
/// is green while (t - offset) mod cycle lies in [0, green_horizontal) and
/// the vertical axis is green for the rest of the cycle.
struct SignalPlan {
  Regime regime = Regime::NoLights;
  double cycle = 60.0;
  double green_horizontal = 30.0;
  double green_vertical = 30.0;
  std::vector<double> offsets;  // indexed by intersection node id

  bool axis_green(NodeId intersection, Axis axis, double t) const;
};

/// GW offsets grow by L / v_max per column (mod cycle), so an eastbound
/// vehicle at v_max meets green at every intersection. SL uses zero
/// offsets. Throws std::invalid_argument for inconsistent timing.
SignalPlan make_signal_plan(const RoadNetwork& net, Regime regime, double cycle,
                            double green_horizontal, double v_max);

/// What an uncontrolled intersection looks like to an arriving vehicle.
/// Indexed by the travel heading of each approach.
struct JunctionView {
  std::array<bool, 4> approaching{};  // front vehicle within the yield window
  std::array<double, 4> waiting{};    // how long that vehicle has been stopped, s
  std::array<bool, 4> box_occupied{}; // indexed by Axis: a vehicle of that axis is in the box
};

/// Go/Stop for a vehicle reaching `intersection` while travelling along
/// `approach`. With lights only the phase matters. Without lights the
/// vehicle stops while a perpendicular vehicle occupies the box or one
/// approaches from its right; if all four approaches are occupied, the one
/// waiting longest (lowest heading on ties) goes.
Gate intersection_gate(const SignalPlan& plan, NodeId intersection, Heading approach, double t,
                       const JunctionView& view = {});

}  // namespace vanet
