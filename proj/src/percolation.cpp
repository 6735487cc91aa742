#include "vanet/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vanet/parallel.hpp"
#include "vanet/union_find.hpp"

namespace vanet {

namespace {

constexpr long double kTermLimit = 1e15L;
constexpr double kClampTolerance = 1e-9;
constexpr std::size_t kFallbackTrials = 100000;
constexpr std::uint64_t kFallbackSeed = 0x5eed5eedULL;

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Neumaier-compensated accumulator.
struct CompensatedSum {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double v) {
    const long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + carry; }
};

// (-a (x - i r))^i / i! for i >= 0, with 0^0 = 1.
long double series_term(long double a, long double x, long double r, int i, bool& overflow) {
  if (i == 0) return 1.0L;
  const long double base = a * (x - i * r);
  if (base <= 0.0L) return 0.0L;
  const long double log_mag = i * std::log(base) - std::lgamma(static_cast<long double>(i) + 1.0L);
  if (log_mag > std::log(kTermLimit)) overflow = true;
  const long double mag = std::exp(log_mag);
  return (i % 2 == 0) ? mag : -mag;
}

double checked_probability(long double v) {
  if (!std::isfinite(static_cast<double>(v))) {
    throw std::domain_error("bridging probability evaluated to a non-finite value");
  }
  if (v < -kClampTolerance || v > 1.0 + kClampTolerance) {
    throw std::domain_error("bridging probability outside [0, 1] beyond rounding tolerance");
  }
  return std::clamp(static_cast<double>(v), 0.0, 1.0);
}

void require_model(const PoissonLineModel& m) {
  if (!(m.lambda >= 0.0) || !(m.rho > 0.0 && m.rho <= 1.0) || !(m.range > 0.0) ||
      !(m.segment_length >= 0.0)) {
    throw std::invalid_argument("PoissonLineModel requires lambda >= 0, 0 < rho <= 1, r > 0, L >= 0");
  }
}

}  // namespace

double lambda_from_flow(double flow_per_second, double mean_speed) {
  if (!(mean_speed > 0.0)) throw std::invalid_argument("mean speed must be positive");
  if (flow_per_second < 0.0) throw std::invalid_argument("flow must be non-negative");
  return 2.0 * flow_per_second / mean_speed;
}

double expected_isolated(const PoissonLineModel& m) {
  return std::exp(-2.0 * m.lambda * m.rho * m.range);
}

BoundValue chain_probability(double length, double intensity, double range) {
  if (!(range > 0.0) || !(length >= 0.0) || !(intensity >= 0.0)) {
    throw std::invalid_argument("chain probability requires r > 0, length >= 0, intensity >= 0");
  }
  // Fixed ends at most r apart are linked directly (closed ball).
  if (length <= range) return {1.0, false};

  const long double lam = intensity;
  const long double r = range;
  const long double x = length;
  const long double a = lam * std::exp(-lam * r);
  const long double damp = std::exp(-lam * r);
  const int k = static_cast<int>(std::floor(x / r));

  bool overflow = false;
  CompensatedSum total;
  for (int i = 0; i <= k; ++i) total.add(series_term(a, x, r, i, overflow));
  // Second sum: (-a (x - (i+1) r))^i / i!, i.e. the first sum's terms at x - r.
  for (int i = 0; i <= k - 1; ++i) total.add(-damp * series_term(a, x - r, r, i, overflow));

  if (overflow) {
    return {chain_probability_monte_carlo(length, intensity, range, kFallbackTrials, kFallbackSeed),
            true};
  }
  return {checked_probability(total.value()), false};
}

double chain_probability_monte_carlo(double length, double intensity, double range,
                                     std::size_t trials, std::uint64_t seed) {
  if (length <= range) return 1.0;
  std::mt19937_64 rng(seed);
  std::poisson_distribution<long> count(intensity * length);
  std::vector<double> pts;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    pts.resize(static_cast<std::size_t>(count(rng)));
    for (auto& p : pts) p = unit_draw(rng) * length;
    std::sort(pts.begin(), pts.end());
    double prev = 0.0;
    bool ok = true;
    for (double p : pts) {
      if (p - prev > range) {
        ok = false;
        break;
      }
      prev = p;
    }
    if (ok && length - prev <= range) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

BoundValue p_upper(const PoissonLineModel& m) {
  require_model(m);
  return chain_probability(m.segment_length, m.intensity(), m.range);
}

BoundValue p_lower(const PoissonLineModel& m) {
  require_model(m);
  return chain_probability(m.segment_length + m.range, m.intensity(), m.range);
}

double lattice_largest_fraction(int n, double p, std::mt19937_64& rng) {
  if (n < 2) throw std::invalid_argument("lattice side must be >= 2");
  const auto sites = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  UnionFind uf(sites);
  auto site = [n](int col, int row) { return static_cast<std::uint32_t>(row * n + col); };
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col + 1 < n; ++col) {
      if (unit_draw(rng) < p) uf.unite(site(col, row), site(col + 1, row));
    }
  }
  for (int row = 0; row + 1 < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (unit_draw(rng) < p) uf.unite(site(col, row), site(col, row + 1));
    }
  }
  std::uint32_t largest = 0;
  for (std::uint32_t s = 0; s < sites; ++s) {
    if (uf.find(s) == s) largest = std::max(largest, uf.set_size(s));
  }
  return static_cast<double>(largest) / static_cast<double>(sites);
}

std::vector<double> lattice_theta_trials(const LatticePercolation& cfg, unsigned jobs) {
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (cfg.n < 2) throw std::invalid_argument("lattice side must be >= 2");
  if (cfg.trials < 1) throw std::invalid_argument("at least one trial required");
  std::vector<double> out(cfg.trials);
  parallel_for(cfg.trials, jobs, [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(cfg.seed, t));
    out[t] = lattice_largest_fraction(cfg.n, cfg.p, rng);
  });
  return out;
}

double lattice_theta(const LatticePercolation& cfg, unsigned jobs) {
  const auto v = lattice_theta_trials(cfg, jobs);
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

namespace {

template <typename Prob>
double solve_half(Prob&& prob, double range) {
  double lo = 0.0;
  double hi = 1.0 / range;
  int grow = 0;
  while (prob(hi) < 0.5) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 60) throw std::runtime_error("no root of bridging probability = 1/2 in bracket");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (prob(mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TransitionBracket predict_transition_density(double segment_length, double range, double rho) {
  if (!(range > 0.0) || !(segment_length >= range)) {
    throw std::invalid_argument("transition density needs L >= r > 0");
  }
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
  const double mu_lo = solve_half(
      [&](double mu) { return chain_probability(segment_length, mu, range).value; }, range);
  const double mu_hi = solve_half(
      [&](double mu) { return chain_probability(segment_length + range, mu, range).value; },
      range);
  return {mu_lo / rho, mu_hi / rho};
}

TheoryPoint theory_point(const PoissonLineModel& m, int lattice_n, std::size_t trials,
                         std::uint64_t seed, unsigned jobs) {
  TheoryPoint tp;
  tp.lambda = m.lambda;
  tp.expected_phi = expected_isolated(m);
  const auto up = p_upper(m);
  const auto lo = p_lower(m);
  tp.p_upper = up.value;
  tp.p_lower = lo.value;
  tp.estimated = up.estimated || lo.estimated;
  tp.theta_from_upper = lattice_theta({lattice_n, tp.p_upper, trials, seed}, jobs);
  tp.theta_from_lower = lattice_theta({lattice_n, tp.p_lower, trials, seed}, jobs);
  return tp;
}

}  // namespace vanet
