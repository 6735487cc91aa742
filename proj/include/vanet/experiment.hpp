#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vanet/percolation.hpp"
#include "vanet/scenario.hpp"

namespace vanet {

/// Metrics of one connectivity sample.
struct Sample {
  double time = 0.0;
  DensitySample density;
  std::size_t equipped = 0;
  std::optional<double> phi;
  std::optional<double> theta;
  std::optional<double> critical_range;
  std::optional<double> hybrid_phi;
  std::optional<double> hybrid_theta;
  std::optional<double> mean_speed;
  std::size_t queued = 0;
  std::uint64_t exited = 0;
};

/// Post-warmup summary of one seeded run.
struct ReplicateResult {
  std::uint64_t seed = 0;
  std::size_t samples = 0;  // post-warmup samples
  double lambda_central = 0.0;
  double lambda_peripheral = 0.0;
  double lambda_network = 0.0;
  std::optional<double> phi;
  std::optional<double> theta;
  std::optional<double> critical_range;
  std::optional<double> hybrid_phi;
  std::optional<double> hybrid_theta;
  std::optional<double> mean_speed;
  std::uint64_t arrived_window = 0;
  std::uint64_t exited_window = 0;
  double queue_slope = 0.0;  // vehicles per second over the window
  bool saturated = false;
  bool nonstationary = false;
};

struct Estimate {
  std::optional<double> mean;
  std::optional<double> se;  // across replicates; absent with fewer than two
};

struct AggregateRow {
  std::string tag;
  double flow = 0.0;
  double rho = 1.0;
  double range = 100.0;
  int grid_n = 5;
  std::string rsu = "none";
  std::size_t replicates = 0;
  Estimate lambda_central;
  Estimate lambda_peripheral;
  Estimate lambda_network;
  Estimate phi;
  Estimate theta;
  Estimate critical_range;
  Estimate hybrid_phi;
  Estimate hybrid_theta;
  Estimate mean_speed;
  std::optional<double> outflow_ratio;  // exited / arrived in the window
  bool saturated = false;     // majority of replicates
  bool nonstationary = false; // any replicate
};

/// Least-squares slope of y over t; 0 for fewer than two points.
double trend_slope(const std::vector<double>& t, const std::vector<double>& y);

/// Saturation: the entry-queue trend over the window adds at least one
/// vehicle. Non-stationary: first- and second-half means of the network
/// density differ by more than 10%.
bool saturation_flag(double slope, double window);
bool stationarity_flag(const std::vector<double>& density);

/// Runs one seed. When cfg.out_dir is set, writes
/// seed<seed>_timeseries.csv and optionally snapshot and cluster CSVs.
ReplicateResult run_replicate(const ScenarioConfig& cfg, std::uint64_t seed);

AggregateRow aggregate(const ScenarioConfig& cfg, const std::vector<ReplicateResult>& reps);

/// All replicates (in parallel up to `jobs`), then the aggregate. Writes
/// aggregate.csv to cfg.out_dir when set.
AggregateRow run_scenario(const ScenarioConfig& cfg, unsigned jobs = 1);

std::vector<std::string> aggregate_header();
std::vector<std::string> aggregate_fields(const AggregateRow& row);
AggregateRow parse_aggregate(const std::vector<std::string>& header,
                             const std::vector<std::string>& fields);
void write_aggregates(const std::filesystem::path& path, const std::vector<AggregateRow>& rows,
                      const std::vector<std::string>& comments = {});
std::vector<AggregateRow> read_aggregates(const std::filesystem::path& path);

/// Cartesian sweep. Scalar settings form the base config; the list-valued
/// axes expand into cells in the order tag, f, rho, r, grid_n, rsu.
struct SweepSpec {
  ScenarioConfig base;
  std::vector<std::string> tags;
  std::vector<double> flows;
  std::vector<double> rhos;
  std::vector<double> ranges;
  std::vector<int> grid_ns;
  std::vector<std::optional<RsuPlacement>> rsus;
};

/// Keys tags, f, rho, r, grid_n and rsu take comma lists; f, rho and r
/// also accept start:stop:step. Everything else goes to the base config.
SweepSpec parse_sweep(const std::vector<std::pair<std::string, std::string>>& settings);

/// Expanded cells. Each is validated; the first invalid cell throws.
std::vector<ScenarioConfig> expand(const SweepSpec& spec);

/// Runs every cell's replicates across `jobs` threads. Rows come back in
/// cell order regardless of scheduling. With an output directory each cell
/// writes into its own subdirectory and sweep.csv collects the rows.
std::vector<AggregateRow> sweep(const SweepSpec& spec, unsigned jobs = 1);

std::string cell_name(const ScenarioConfig& cfg);

/// Simulated isolation and clustering beside the closed-form predictions.
struct TheoryComparison {
  double lambda_network = 0.0;  // vehicles/km
  double lambda_central = 0.0;  // vehicles/km
  double rho = 1.0;
  std::optional<double> phi_sim;
  std::optional<double> phi_se;
  double phi_theory = 0.0;
  std::optional<double> theta_sim;
  double p_upper = 0.0;
  double p_lower = 0.0;
  double theta_lower = 0.0;  // lattice theta at p_lower
  double theta_upper = 0.0;  // lattice theta at p_upper
};

struct TheoryReport {
  std::vector<TheoryComparison> rows;
  double max_phi_deviation = 0.0;
  /// Rows where the simulated isolated fraction exceeds the prediction by
  /// more than three standard errors (the prediction is an upper bound).
  std::size_t phi_bound_violations = 0;
  std::optional<double> theta_half_density;  // vehicles/km, interpolated
  TransitionBracket bracket;                 // vehicles/m
};

/// Rows must all be NL-A with the same rho, range, grid and segment length;
/// otherwise throws ConfigError.
TheoryReport compare_to_theory(const std::vector<AggregateRow>& rows, double segment_length,
                               std::size_t lattice_trials, std::uint64_t seed,
                               unsigned jobs = 1);
void write_theory_report(const std::filesystem::path& path, const TheoryReport& report);

/// Density (x) at which a piecewise-linear y(x) first reaches `level`,
/// scanning rows sorted by x.
std::optional<double> first_crossing(std::vector<std::pair<double, double>> xy, double level);

/// Analytic curves for a list of densities (vehicles/m).
std::vector<TheoryPoint> theory_curve(const std::vector<double>& lambdas, double rho, double range,
                                      double segment_length, int lattice_n, std::size_t trials,
                                      std::uint64_t seed, unsigned jobs = 1);
void write_theory_curve(const std::filesystem::path& path, const std::vector<TheoryPoint>& pts,
                        const std::vector<std::string>& comments = {});

}  // namespace vanet
