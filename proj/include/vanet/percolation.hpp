#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vanet {

/// One-dimensional Poisson model of the vehicles on a single road.
/// `lambda` counts vehicles of both directions per meter; formulas use the
/// equipped intensity lambda * rho.
struct PoissonLineModel {
  double lambda = 0.0;
  double rho = 1.0;
  double range = 100.0;
  double segment_length = 400.0;

  double intensity() const { return lambda * rho; }
};

/// A probability, flagged when it had to be estimated by simulation
/// because the closed form is numerically unusable.
struct BoundValue {
  double value = 0.0;
  bool estimated = false;
};

/// Vehicles per meter of road for a per-direction flow (vehicles/s) and a
/// mean speed. Throws std::invalid_argument unless mean_speed > 0.
double lambda_from_flow(double flow_per_second, double mean_speed);

/// exp(-2 lambda rho r), the isolated fraction on an infinite Poisson line.
double expected_isolated(const PoissonLineModel& m);

/// Probability that Poisson points of the given intensity on [0, length],
/// together with fixed nodes at 0 and length, have every spacing <= range.
/// Alternating series evaluated with compensated summation in long double.
BoundValue chain_probability(double length, double intensity, double range);

/// Monte-Carlo estimate of the same event.
double chain_probability_monte_carlo(double length, double intensity, double range,
                                     std::size_t trials, std::uint64_t seed);

/// Segment bridging probability assuming a relay node at each intersection
/// centre (necessary condition). Equals 1 when L < r.
BoundValue p_upper(const PoissonLineModel& m);

/// Closed-form lower bound, the chain probability over L + r.
BoundValue p_lower(const PoissonLineModel& m);

struct LatticePercolation {
  int n = 64;
  double p = 0.5;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
};

/// Fraction of sites in the largest open cluster of one n x n bond sample.
/// Edge k is open iff its uniform draw is below p, so samples sharing a
/// generator state are nested in p.
double lattice_largest_fraction(int n, double p, std::mt19937_64& rng);

/// Per-trial largest-cluster fractions; trial t uses seed derive_seed(seed, t).
std::vector<double> lattice_theta_trials(const LatticePercolation& cfg, unsigned jobs = 1);

/// Mean of lattice_theta_trials, reduced in trial order.
double lattice_theta(const LatticePercolation& cfg, unsigned jobs = 1);

/// Vehicle densities (vehicles per meter, all vehicles) at which p_upper and
/// p_lower reach 1/2. The percolation density lies in [lambda_lo, lambda_hi].
struct TransitionBracket {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
};

/// Throws std::invalid_argument if L < r or rho is outside (0, 1], and
/// std::runtime_error if no root is found.
TransitionBracket predict_transition_density(double segment_length, double range, double rho);

/// One row of the analytic curves: isolation, bridging bounds, and the
/// largest-cluster fractions they imply on an n x n lattice.
struct TheoryPoint {
  double lambda = 0.0;  // vehicles per meter
  double expected_phi = 0.0;
  double p_upper = 0.0;
  double p_lower = 0.0;
  double theta_from_upper = 0.0;
  double theta_from_lower = 0.0;
  bool estimated = false;
};

TheoryPoint theory_point(const PoissonLineModel& m, int lattice_n, std::size_t trials,
                         std::uint64_t seed, unsigned jobs = 1);

}  // namespace vanet
