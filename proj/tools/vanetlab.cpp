#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vanet/csv.hpp"
#include "vanet/errors.hpp"
#include "vanet/experiment.hpp"
#include "vanet/percolation.hpp"
#include "vanet/scenario.hpp"

using namespace vanet;

namespace {

enum ExitCode : int { kOk = 0, kConfig = 2, kIo = 3, kRuntime = 4 };

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Per-parameter flags shared by run and sweep; they are appended after the
/// config file so the command line wins.
struct Overrides {
  std::string config;
  std::optional<std::string> seed, out, f, rho, r, grid_n, regime, dest, rsu;
  unsigned jobs = 1;

  void attach(CLI::App& app, bool config_required) {
    auto* c = app.add_option("--config", config, "key=value configuration file");
    if (config_required) c->required();
    app.add_option("--seed", seed, "replicate seed (replaces the seed list)");
    app.add_option("--out", out, "output directory");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--f", f, "entry flow, veh/h per entry");
    app.add_option("--rho", rho, "equipped fraction");
    app.add_option("--r", r, "radio range, m");
    app.add_option("--grid-n", grid_n, "grid side (intersections per row)");
    app.add_option("--regime", regime, "NL, SL or GW");
    app.add_option("--dest", dest, "A or R");
    app.add_option("--rsu", rsu, "none, intersections, midpoints or custom");
  }

  Settings settings() const {
    Settings s = config.empty() ? Settings{} : read_settings(config);
    auto add = [&](const char* key, const std::optional<std::string>& v) {
      if (v) s.emplace_back(key, *v);
    };
    add("seed", seed);
    add("out", out);
    add("f", f);
    add("rho", rho);
    add("r", r);
    add("grid_n", grid_n);
    add("regime", regime);
    add("dest", dest);
    add("rsu", rsu);
    return s;
  }
};

std::vector<double> steps(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw ConfigError("need min <= max and step > 0");
  std::vector<double> v;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(lo + static_cast<double>(i) * step);
  return v;
}

void print_rows(const std::vector<AggregateRow>& rows, const std::string& comment) {
  CsvWriter w(std::cout, aggregate_header(), {comment});
  for (const auto& r : rows) w.row(aggregate_fields(r));
}

int cmd_run(const Overrides& o) {
  ScenarioConfig cfg;
  for (const auto& [k, v] : o.settings()) apply_setting(cfg, k, v);
  cfg.validate();
  const auto row = run_scenario(cfg, o.jobs);
  print_rows({row}, "config " + describe(cfg));
  return kOk;
}

int cmd_sweep(const Overrides& o) {
  const auto spec = parse_sweep(o.settings());
  const auto rows = sweep(spec, o.jobs);
  print_rows(rows, "config " + describe(spec.base));
  return kOk;
}

struct TheoryArgs {
  double lambda_min = 2.0, lambda_max = 80.0, lambda_step = 2.0;  // veh/km
  double rho = 1.0, range = 100.0, length = 400.0;
  int grid_n = 5;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out;
};

std::ostream* open_target(const std::string& path, std::ofstream& file) {
  if (path.empty()) return &std::cout;
  file.open(path);
  if (!file) throw IoError("cannot open " + path + " for writing");
  return &file;
}

int cmd_theory(const TheoryArgs& a) {
  std::vector<double> lambdas;
  for (double l : steps(a.lambda_min, a.lambda_max, a.lambda_step)) lambdas.push_back(l / 1000.0);
  const auto pts = theory_curve(lambdas, a.rho, a.range, a.length, a.grid_n, a.trials, a.seed, a.jobs);
  const auto br = predict_transition_density(a.length, a.range, a.rho);
  const std::string comment = "config rho=" + format_double(a.rho) + " r=" + format_double(a.range) +
                              " L=" + format_double(a.length) + " grid_n=" +
                              std::to_string(a.grid_n) + " trials=" + std::to_string(a.trials) +
                              " seed=" + std::to_string(a.seed) + " bracket_lo=" +
                              format_double(br.lambda_lo * 1000.0) + " bracket_hi=" +
                              format_double(br.lambda_hi * 1000.0);
  if (a.out.empty()) {
    CsvWriter w(std::cout, {"lambda", "expected_phi", "p_upper", "p_lower", "theta_from_upper",
                            "theta_from_lower", "estimated"},
                {comment});
    for (const auto& p : pts) {
      w.row({format_double(p.lambda), format_double(p.expected_phi), format_double(p.p_upper),
             format_double(p.p_lower), format_double(p.theta_from_upper),
             format_double(p.theta_from_lower), p.estimated ? "1" : "0"});
    }
  } else {
    write_theory_curve(a.out, pts, {comment});
  }
  return kOk;
}

struct PercolateArgs {
  std::vector<int> sizes{64, 128};
  double p_min = 0.40, p_max = 0.60, p_step = 0.01;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out;
};

int cmd_percolate(const PercolateArgs& a) {
  std::ofstream file;
  std::ostream* os = open_target(a.out, file);
  std::string sizes;
  for (int n : a.sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(n);
  CsvWriter w(*os, {"n", "p", "theta", "theta_se"},
              {"config n=" + sizes + " trials=" + std::to_string(a.trials) +
               " seed=" + std::to_string(a.seed)});
  for (int n : a.sizes) {
    for (double p : steps(a.p_min, a.p_max, a.p_step)) {
      const auto v = lattice_theta_trials({n, p, a.trials, a.seed}, a.jobs);
      double m = 0.0;
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - m) * (x - m);
      const double se = v.size() > 1 ? std::sqrt(ss / (v.size() - 1) / v.size()) : 0.0;
      w.row({std::to_string(n), format_double(p), format_double(m), format_double(se)});
    }
  }
  return kOk;
}

struct CompareArgs {
  std::string input;
  double length = 400.0;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out;
};

int cmd_compare(const CompareArgs& a) {
  const auto rows = read_aggregates(a.input);
  const auto rep = compare_to_theory(rows, a.length, a.trials, a.seed, a.jobs);
  if (!a.out.empty()) write_theory_report(a.out, rep);
  std::cout << "rows=" << rep.rows.size() << " max_phi_deviation=" << format_double(rep.max_phi_deviation)
            << " phi_bound_violations=" << rep.phi_bound_violations
            << " theta_half_density=" << format_optional(rep.theta_half_density)
            << " bracket=[" << format_double(rep.bracket.lambda_lo * 1000.0) << ", "
            << format_double(rep.bracket.lambda_hi * 1000.0) << "] veh/km\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vanetlab: grid-city VANET connectivity experiments"};
  app.require_subcommand(1);

  Overrides run_o;
  auto* run = app.add_subcommand("run", "run one scenario over its seed list");
  run_o.attach(*run, false);

  Overrides sweep_o;
  auto* sw = app.add_subcommand("sweep", "run a Cartesian matrix of scenarios");
  sweep_o.attach(*sw, true);

  TheoryArgs th;
  auto* theory = app.add_subcommand("theory", "export closed-form connectivity curves");
  theory->add_option("--lambda-min", th.lambda_min, "veh/km");
  theory->add_option("--lambda-max", th.lambda_max, "veh/km");
  theory->add_option("--lambda-step", th.lambda_step, "veh/km");
  theory->add_option("--rho", th.rho);
  theory->add_option("--r", th.range);
  theory->add_option("--L", th.length, "segment length, m");
  theory->add_option("--grid-n", th.grid_n, "lattice side");
  theory->add_option("--trials", th.trials, "lattice trials per point");
  theory->add_option("--seed", th.seed);
  theory->add_option("--jobs", th.jobs)->check(CLI::PositiveNumber);
  theory->add_option("--out", th.out, "CSV path (default stdout)");

  PercolateArgs pc;
  auto* perc = app.add_subcommand("percolate", "bond percolation on square lattices");
  perc->add_option("--n", pc.sizes, "lattice sides")->delimiter(',');
  perc->add_option("--p-min", pc.p_min);
  perc->add_option("--p-max", pc.p_max);
  perc->add_option("--p-step", pc.p_step);
  perc->add_option("--trials", pc.trials);
  perc->add_option("--seed", pc.seed);
  perc->add_option("--jobs", pc.jobs)->check(CLI::PositiveNumber);
  perc->add_option("--out", pc.out, "CSV path (default stdout)");

  CompareArgs cm;
  auto* cmp = app.add_subcommand("compare", "join NL-A aggregates against theory");
  cmp->add_option("--input", cm.input, "aggregate or sweep CSV")->required();
  cmp->add_option("--L", cm.length, "segment length, m");
  cmp->add_option("--trials", cm.trials, "lattice trials per row");
  cmp->add_option("--seed", cm.seed);
  cmp->add_option("--jobs", cm.jobs)->check(CLI::PositiveNumber);
  cmp->add_option("--out", cm.out, "report CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(run_o);
    if (*sw) return cmd_sweep(sweep_o);
    if (*theory) return cmd_theory(th);
    if (*perc) return cmd_percolate(pc);
    if (*cmp) return cmd_compare(cm);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
  return kRuntime;
}
