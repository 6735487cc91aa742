#include "vanet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

#include "vanet/csv.hpp"
#include "vanet/errors.hpp"
#include "vanet/parallel.hpp"

namespace vanet {

namespace {

constexpr double kTimeEps = 1e-9;

struct Accumulator {
  double sum = 0.0;
  std::size_t n = 0;
  void add(const std::optional<double>& v) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  void add(double v) { add(std::optional<double>(v)); }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

Estimate estimate(const std::vector<ReplicateResult>& reps,
                  std::optional<double> (*get)(const ReplicateResult&)) {
  std::vector<double> v;
  for (const auto& r : reps) {
    if (auto x = get(r)) v.push_back(*x);
  }
  Estimate e;
  if (v.empty()) return e;
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  e.mean = m;
  if (v.size() >= 2) {
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    e.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return e;
}

std::optional<RsuDeployment> deployment_for(const ScenarioConfig& cfg, const RoadNetwork& net) {
  if (!cfg.rsu) return std::nullopt;
  std::vector<Point2> custom;
  if (*cfg.rsu == RsuPlacement::Custom) custom = read_rsu_positions(cfg.rsu_file);
  try {
    return place_rsus(net, *cfg.rsu, cfg.effective_rsu_range(), custom);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Sample take_sample(const Simulator& sim, const ScenarioConfig& cfg,
                   const std::optional<RsuDeployment>& dep, std::optional<ClusterReport>& v2v,
                   ConnectivitySnapshot& snap) {
  Sample s;
  s.time = sim.time();
  s.density = sim.measure_density();
  snap = sim.equipped_snapshot(cfg.range);
  s.equipped = snap.nodes.size();
  v2v = cluster(snap);
  if (v2v && s.equipped >= 2) {
    s.phi = v2v->phi;
    s.theta = v2v->theta;
    s.critical_range = critical_range(snap);
    if (dep) {
      const auto hybrid = hybrid_cluster(snap, *dep);
      s.hybrid_phi = hybrid->phi;
      s.hybrid_theta = hybrid->theta;
    }
  }
  s.mean_speed = sim.mean_speed();
  s.queued = sim.queued();
  s.exited = sim.counters().exited;
  return s;
}

std::vector<std::string> config_comments(const ScenarioConfig& cfg, std::uint64_t seed) {
  return {"config " + describe(cfg), "replicate seed=" + std::to_string(seed)};
}

std::string flag(bool b) { return b ? "1" : "0"; }

bool parse_flag(const std::string& s) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw IoError("expected 0 or 1, got '" + s + "'");
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view v, T (*conv)(std::string_view)) {
  std::vector<T> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    std::string_view item = v.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw ConfigError("empty entry in list '" + std::string(key) + "'");
    out.push_back(conv(item));
    if (comma == std::string_view::npos) break;
    v = v.substr(comma + 1);
  }
  return out;
}

double as_number(std::string_view s) {
  try {
    return parse_double(s);
  } catch (const IoError&) {
    throw ConfigError("expected a number, got '" + std::string(s) + "'");
  }
}

std::vector<double> number_list(std::string_view key, std::string_view v) {
  if (v.find(':') != std::string_view::npos && v.find(',') == std::string_view::npos) {
    const auto parts = [&] {
      std::vector<double> p;
      std::string_view rest = v;
      while (true) {
        const auto c = rest.find(':');
        p.push_back(as_number(rest.substr(0, c)));
        if (c == std::string_view::npos) break;
        rest = rest.substr(c + 1);
      }
      return p;
    }();
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw ConfigError("range list '" + std::string(key) + "' must be start:stop:step");
    }
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
  }
  return parse_list<double>(key, v, &as_number);
}

}  // namespace

double trend_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = std::min(t.size(), y.size());
  if (n < 2) return 0.0;
  const double tm = std::accumulate(t.begin(), t.begin() + static_cast<long>(n), 0.0) / n;
  const double ym = std::accumulate(y.begin(), y.begin() + static_cast<long>(n), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (t[i] - tm) * (y[i] - ym);
    sxx += (t[i] - tm) * (t[i] - tm);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

bool saturation_flag(double slope, double window) { return slope > 0.0 && slope * window >= 1.0; }

bool stationarity_flag(const std::vector<double>& density) {
  if (density.size() < 2) return false;
  const std::size_t half = density.size() / 2;
  const double a = std::accumulate(density.begin(), density.begin() + static_cast<long>(half), 0.0) /
                   static_cast<double>(half);
  const double b = std::accumulate(density.begin() + static_cast<long>(half), density.end(), 0.0) /
                   static_cast<double>(density.size() - half);
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 && std::abs(a - b) > 0.1 * scale;
}

ReplicateResult run_replicate(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  SimConfig sc = cfg.sim;
  sc.seed = seed;
  Simulator sim(sc);
  const auto dep = deployment_for(cfg, sim.network());

  std::unique_ptr<CsvWriter> series;
  std::unique_ptr<CsvWriter> snapshots;
  std::unique_ptr<CsvWriter> clusters;
  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create " + cfg.out_dir.string() + ": " + ec.message());
    const auto stem = cfg.out_dir / ("seed" + std::to_string(seed));
    const auto comments = config_comments(cfg, seed);
    series = std::make_unique<CsvWriter>(
        stem.string() + "_timeseries.csv",
        std::vector<std::string>{"time", "lambda_central", "lambda_peripheral", "lambda_network",
                                 "n_total", "n_equipped", "phi", "theta", "critical_range",
                                 "hybrid_phi", "hybrid_theta", "mean_speed", "queued", "exited"},
        comments);
    if (cfg.write_snapshots) {
      snapshots = std::make_unique<CsvWriter>(stem.string() + "_snapshots.csv",
                                              vehicle_snapshot_header(), comments);
    }
    if (cfg.write_clusters) {
      clusters = std::make_unique<CsvWriter>(
          stem.string() + "_clusters.csv",
          std::vector<std::string>{"time", "node_id", "cluster_id", "cluster_size"}, comments);
    }
  }

  const auto& s = cfg.sim;
  const auto every = static_cast<std::uint64_t>(std::max(1.0, std::round(cfg.sample_interval / s.dt)));
  ReplicateResult res;
  res.seed = seed;
  Accumulator lc, lp, ln, phi, theta, cr, hphi, htheta, speed;
  std::vector<double> times;
  std::vector<double> queue;
  std::vector<double> density;
  bool window_open = s.warmup <= 0.0;
  std::uint64_t arrived0 = 0;
  std::uint64_t exited0 = 0;

  while (sim.time() < s.duration - 0.5 * s.dt) {
    sim.step();
    if (!window_open && sim.time() >= s.warmup - kTimeEps) {
      window_open = true;
      arrived0 = sim.counters().arrived;
      exited0 = sim.counters().exited;
    }
    if (sim.steps() % every != 0) continue;

    std::optional<ClusterReport> report;
    ConnectivitySnapshot snap;
    const Sample smp = take_sample(sim, cfg, dep, report, snap);
    if (series) {
      const auto& d = smp.density;
      series->row({format_double(smp.time), format_double(d.lambda_central),
                   format_double(d.lambda_peripheral), format_double(d.lambda_network),
                   std::to_string(d.n_total), std::to_string(smp.equipped),
                   format_optional(smp.phi), format_optional(smp.theta),
                   format_optional(smp.critical_range), format_optional(smp.hybrid_phi),
                   format_optional(smp.hybrid_theta), format_optional(smp.mean_speed),
                   std::to_string(smp.queued), std::to_string(smp.exited)});
    }
    if (snapshots) write_vehicle_snapshot(*snapshots, sim);
    if (clusters && report) {
      const std::string t = format_double(smp.time);
      for (std::size_t i = 0; i < snap.nodes.size(); ++i) {
        const auto label = report->labels[i];
        clusters->row({t, std::to_string(snap.nodes[i].id), std::to_string(label),
                       std::to_string(report->component_sizes[label])});
      }
    }
    if (smp.time < s.warmup - kTimeEps) continue;

    ++res.samples;
    lc.add(smp.density.lambda_central);
    lp.add(smp.density.lambda_peripheral);
    ln.add(smp.density.lambda_network);
    phi.add(smp.phi);
    theta.add(smp.theta);
    cr.add(smp.critical_range);
    hphi.add(smp.hybrid_phi);
    htheta.add(smp.hybrid_theta);
    speed.add(smp.mean_speed);
    times.push_back(smp.time);
    queue.push_back(static_cast<double>(smp.queued));
    density.push_back(smp.density.lambda_network);
  }

  res.lambda_central = lc.mean().value_or(0.0);
  res.lambda_peripheral = lp.mean().value_or(0.0);
  res.lambda_network = ln.mean().value_or(0.0);
  res.phi = phi.mean();
  res.theta = theta.mean();
  res.critical_range = cr.mean();
  res.hybrid_phi = hphi.mean();
  res.hybrid_theta = htheta.mean();
  res.mean_speed = speed.mean();
  res.arrived_window = sim.counters().arrived - arrived0;
  res.exited_window = sim.counters().exited - exited0;
  res.queue_slope = trend_slope(times, queue);
  const double window = times.empty() ? 0.0 : times.back() - times.front();
  res.saturated = saturation_flag(res.queue_slope, window);
  res.nonstationary = stationarity_flag(density);
  return res;
}

AggregateRow aggregate(const ScenarioConfig& cfg, const std::vector<ReplicateResult>& reps) {
  AggregateRow row;
  row.tag = cfg.tag();
  row.flow = cfg.sim.flow;
  row.rho = cfg.sim.rho;
  row.range = cfg.range;
  row.grid_n = cfg.sim.grid_n;
  row.rsu = std::string(rsu_label(cfg.rsu));
  row.replicates = reps.size();
  row.lambda_central = estimate(reps, [](const ReplicateResult& r) -> std::optional<double> {
    return r.lambda_central;
  });
  row.lambda_peripheral = estimate(reps, [](const ReplicateResult& r) -> std::optional<double> {
    return r.lambda_peripheral;
  });
  row.lambda_network = estimate(reps, [](const ReplicateResult& r) -> std::optional<double> {
    return r.lambda_network;
  });
  row.phi = estimate(reps, [](const ReplicateResult& r) { return r.phi; });
  row.theta = estimate(reps, [](const ReplicateResult& r) { return r.theta; });
  row.critical_range = estimate(reps, [](const ReplicateResult& r) { return r.critical_range; });
  row.hybrid_phi = estimate(reps, [](const ReplicateResult& r) { return r.hybrid_phi; });
  row.hybrid_theta = estimate(reps, [](const ReplicateResult& r) { return r.hybrid_theta; });
  row.mean_speed = estimate(reps, [](const ReplicateResult& r) { return r.mean_speed; });
  std::uint64_t arrived = 0;
  std::uint64_t exited = 0;
  std::size_t saturated = 0;
  for (const auto& r : reps) {
    arrived += r.arrived_window;
    exited += r.exited_window;
    saturated += r.saturated;
    row.nonstationary = row.nonstationary || r.nonstationary;
  }
  if (arrived > 0) row.outflow_ratio = static_cast<double>(exited) / static_cast<double>(arrived);
  row.saturated = 2 * saturated > reps.size();
  return row;
}

AggregateRow run_scenario(const ScenarioConfig& cfg, unsigned jobs) {
  cfg.validate();
  std::vector<ReplicateResult> reps(cfg.seeds.size());
  parallel_for(reps.size(), jobs, [&](std::size_t i) { reps[i] = run_replicate(cfg, cfg.seeds[i]); });
  auto row = aggregate(cfg, reps);
  if (!cfg.out_dir.empty()) {
    write_aggregates(cfg.out_dir / "aggregate.csv", {row}, {"config " + describe(cfg)});
  }
  return row;
}

namespace {

const std::vector<std::pair<std::string, Estimate AggregateRow::*>>& estimate_columns() {
  static const std::vector<std::pair<std::string, Estimate AggregateRow::*>> cols{
      {"lambda_central", &AggregateRow::lambda_central},
      {"lambda_peripheral", &AggregateRow::lambda_peripheral},
      {"lambda_network", &AggregateRow::lambda_network},
      {"phi", &AggregateRow::phi},
      {"theta", &AggregateRow::theta},
      {"critical_range", &AggregateRow::critical_range},
      {"hybrid_phi", &AggregateRow::hybrid_phi},
      {"hybrid_theta", &AggregateRow::hybrid_theta},
      {"mean_speed", &AggregateRow::mean_speed},
  };
  return cols;
}

}  // namespace

std::vector<std::string> aggregate_header() {
  std::vector<std::string> h{"tag", "f", "rho", "r", "grid_n", "rsu", "replicates"};
  for (const auto& [name, _] : estimate_columns()) {
    h.push_back(name);
    h.push_back(name + "_se");
  }
  h.insert(h.end(), {"outflow_ratio", "saturated", "nonstationary"});
  return h;
}

std::vector<std::string> aggregate_fields(const AggregateRow& row) {
  std::vector<std::string> f{row.tag,
                             format_double(row.flow),
                             format_double(row.rho),
                             format_double(row.range),
                             std::to_string(row.grid_n),
                             row.rsu,
                             std::to_string(row.replicates)};
  for (const auto& [_, member] : estimate_columns()) {
    f.push_back(format_optional((row.*member).mean));
    f.push_back(format_optional((row.*member).se));
  }
  f.push_back(format_optional(row.outflow_ratio));
  f.push_back(flag(row.saturated));
  f.push_back(flag(row.nonstationary));
  return f;
}

AggregateRow parse_aggregate(const std::vector<std::string>& header,
                             const std::vector<std::string>& fields) {
  if (fields.size() != header.size()) throw IoError("aggregate row has the wrong width");
  std::map<std::string, std::string> by;
  for (std::size_t i = 0; i < header.size(); ++i) by[header[i]] = fields[i];
  auto get = [&](const std::string& k) -> const std::string& {
    const auto it = by.find(k);
    if (it == by.end()) throw IoError("aggregate table lacks column '" + k + "'");
    return it->second;
  };
  AggregateRow row;
  row.tag = get("tag");
  row.flow = parse_double(get("f"));
  row.rho = parse_double(get("rho"));
  row.range = parse_double(get("r"));
  row.grid_n = static_cast<int>(parse_int(get("grid_n")));
  row.rsu = get("rsu");
  row.replicates = static_cast<std::size_t>(parse_int(get("replicates")));
  for (const auto& [name, member] : estimate_columns()) {
    (row.*member).mean = parse_optional(get(name));
    (row.*member).se = parse_optional(get(name + "_se"));
  }
  row.outflow_ratio = parse_optional(get("outflow_ratio"));
  row.saturated = parse_flag(get("saturated"));
  row.nonstationary = parse_flag(get("nonstationary"));
  return row;
}

void write_aggregates(const std::filesystem::path& path, const std::vector<AggregateRow>& rows,
                      const std::vector<std::string>& comments) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  CsvWriter w(path, aggregate_header(), comments);
  for (const auto& r : rows) w.row(aggregate_fields(r));
}

std::vector<AggregateRow> read_aggregates(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  std::vector<AggregateRow> rows;
  for (const auto& r : table.rows) rows.push_back(parse_aggregate(table.header, r));
  return rows;
}

SweepSpec parse_sweep(const std::vector<std::pair<std::string, std::string>>& settings) {
  SweepSpec spec;
  spec.base.write_snapshots = false;
  spec.base.write_clusters = false;
  for (const auto& [key, value] : settings) {
    if (key == "tags" || key == "tag") {
      spec.tags = parse_list<std::string>(key, value,
                                          [](std::string_view s) { return std::string(s); });
    } else if (key == "f" || key == "flow") {
      spec.flows = number_list(key, value);
    } else if (key == "rho") {
      spec.rhos = number_list(key, value);
    } else if (key == "r" || key == "range") {
      spec.ranges = number_list(key, value);
    } else if (key == "grid_n") {
      spec.grid_ns.clear();
      for (double v : number_list(key, value)) {
        if (v != std::floor(v)) throw ConfigError("grid_n entries must be integers");
        spec.grid_ns.push_back(static_cast<int>(v));
      }
    } else if (key == "rsu") {
      spec.rsus = parse_list<std::optional<RsuPlacement>>(
          key, value, [](std::string_view s) -> std::optional<RsuPlacement> {
            if (s == "none") return std::nullopt;
            try {
              return parse_rsu_placement(s);
            } catch (const std::invalid_argument& e) {
              throw ConfigError(e.what());
            }
          });
    } else {
      apply_setting(spec.base, key, value);
    }
  }
  if (spec.tags.empty()) spec.tags = {spec.base.tag()};
  if (spec.flows.empty()) spec.flows = {spec.base.sim.flow};
  if (spec.rhos.empty()) spec.rhos = {spec.base.sim.rho};
  if (spec.ranges.empty()) spec.ranges = {spec.base.range};
  if (spec.grid_ns.empty()) spec.grid_ns = {spec.base.sim.grid_n};
  if (spec.rsus.empty()) spec.rsus = {spec.base.rsu};
  return spec;
}

std::string cell_name(const ScenarioConfig& cfg) {
  return cfg.tag() + "_f" + format_double(cfg.sim.flow) + "_rho" + format_double(cfg.sim.rho) +
         "_r" + format_double(cfg.range) + "_n" + std::to_string(cfg.sim.grid_n) + "_" +
         std::string(rsu_label(cfg.rsu));
}

std::vector<ScenarioConfig> expand(const SweepSpec& spec) {
  std::vector<ScenarioConfig> cells;
  for (const auto& tag : spec.tags) {
    for (double f : spec.flows) {
      for (double rho : spec.rhos) {
        for (double r : spec.ranges) {
          for (int n : spec.grid_ns) {
            for (const auto& rsu : spec.rsus) {
              ScenarioConfig c = spec.base;
              c.set_tag(tag);
              c.sim.flow = f;
              c.sim.rho = rho;
              c.range = r;
              c.sim.grid_n = n;
              c.rsu = rsu;
              if (!spec.base.out_dir.empty()) c.out_dir = spec.base.out_dir / cell_name(c);
              try {
                c.validate();
              } catch (const ConfigError& e) {
                throw ConfigError("sweep cell " + cell_name(c) + ": " + e.what());
              }
              cells.push_back(std::move(c));
            }
          }
        }
      }
    }
  }
  return cells;
}

std::vector<AggregateRow> sweep(const SweepSpec& spec, unsigned jobs) {
  const auto cells = expand(spec);
  for (const auto& c : cells) {
    if (c.out_dir.empty()) continue;
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec) throw IoError("cannot create " + c.out_dir.string() + ": " + ec.message());
  }
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t s = 0; s < cells[c].seeds.size(); ++s) tasks.emplace_back(c, s);
  }
  std::vector<std::vector<ReplicateResult>> results(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) results[c].resize(cells[c].seeds.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t t) {
    const auto [c, s] = tasks[t];
    results[c][s] = run_replicate(cells[c], cells[c].seeds[s]);
  });
  std::vector<AggregateRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    rows.push_back(aggregate(cells[c], results[c]));
    if (!cells[c].out_dir.empty()) {
      write_aggregates(cells[c].out_dir / "aggregate.csv", {rows.back()},
                       {"config " + describe(cells[c])});
    }
  }
  if (!spec.base.out_dir.empty()) {
    write_aggregates(spec.base.out_dir / "sweep.csv", rows, {"config " + describe(spec.base)});
  }
  return rows;
}

std::optional<double> first_crossing(std::vector<std::pair<double, double>> xy, double level) {
  std::sort(xy.begin(), xy.end());
  if (xy.empty() || xy.front().second >= level) return std::nullopt;
  for (std::size_t i = 1; i < xy.size(); ++i) {
    const auto [x0, y0] = xy[i - 1];
    const auto [x1, y1] = xy[i];
    if (y1 >= level) {
      if (y1 == y0) return x1;
      return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
    }
  }
  return std::nullopt;
}

TheoryReport compare_to_theory(const std::vector<AggregateRow>& rows, double segment_length,
                               std::size_t lattice_trials, std::uint64_t seed, unsigned jobs) {
  if (rows.empty()) throw ConfigError("no rows to compare");
  const auto& first = rows.front();
  for (const auto& r : rows) {
    if (r.tag != "NL-A") {
      throw ConfigError("theory comparison applies to NL-A rows only, got " + r.tag);
    }
    if (r.rho != first.rho || r.range != first.range || r.grid_n != first.grid_n) {
      throw ConfigError("theory comparison needs a common rho, range and grid size");
    }
  }
  TheoryReport rep;
  std::vector<std::pair<double, double>> curve;
  for (const auto& r : rows) {
    TheoryComparison c;
    c.lambda_network = r.lambda_network.mean.value_or(0.0);
    c.lambda_central = r.lambda_central.mean.value_or(0.0);
    c.rho = r.rho;
    c.phi_sim = r.phi.mean;
    c.phi_se = r.phi.se;
    c.theta_sim = r.theta.mean;
    c.phi_theory = expected_isolated({c.lambda_network / 1000.0, r.rho, r.range, segment_length});
    const PoissonLineModel central{c.lambda_central / 1000.0, r.rho, r.range, segment_length};
    c.p_upper = p_upper(central).value;
    c.p_lower = p_lower(central).value;
    c.theta_upper = lattice_theta({r.grid_n, c.p_upper, lattice_trials, seed}, jobs);
    c.theta_lower = lattice_theta({r.grid_n, c.p_lower, lattice_trials, seed}, jobs);
    if (c.phi_sim) {
      const double dev = *c.phi_sim - c.phi_theory;
      rep.max_phi_deviation = std::max(rep.max_phi_deviation, std::abs(dev));
      if (dev > 3.0 * c.phi_se.value_or(0.0)) ++rep.phi_bound_violations;
    }
    if (c.theta_sim) curve.emplace_back(c.lambda_central, *c.theta_sim);
    rep.rows.push_back(c);
  }
  rep.theta_half_density = first_crossing(curve, 0.5);
  rep.bracket = predict_transition_density(segment_length, first.range, first.rho);
  return rep;
}

void write_theory_report(const std::filesystem::path& path, const TheoryReport& report) {
  std::vector<std::string> comments{
      "max_phi_deviation=" + format_double(report.max_phi_deviation) +
      " phi_bound_violations=" + std::to_string(report.phi_bound_violations) +
      " theta_half_density=" + format_optional(report.theta_half_density) +
      " bracket_lo=" + format_double(report.bracket.lambda_lo * 1000.0) +
      " bracket_hi=" + format_double(report.bracket.lambda_hi * 1000.0)};
  CsvWriter w(path,
              {"lambda_network", "lambda_central", "rho", "phi_sim", "phi_se", "phi_theory",
               "theta_sim", "p_upper", "p_lower", "theta_lower", "theta_upper"},
              comments);
  for (const auto& c : report.rows) {
    w.row({format_double(c.lambda_network), format_double(c.lambda_central), format_double(c.rho),
           format_optional(c.phi_sim), format_optional(c.phi_se), format_double(c.phi_theory),
           format_optional(c.theta_sim), format_double(c.p_upper), format_double(c.p_lower),
           format_double(c.theta_lower), format_double(c.theta_upper)});
  }
}

std::vector<TheoryPoint> theory_curve(const std::vector<double>& lambdas, double rho, double range,
                                      double segment_length, int lattice_n, std::size_t trials,
                                      std::uint64_t seed, unsigned jobs) {
  std::vector<TheoryPoint> out;
  for (double lam : lambdas) {
    out.push_back(theory_point({lam, rho, range, segment_length}, lattice_n, trials, seed, jobs));
  }
  return out;
}

void write_theory_curve(const std::filesystem::path& path, const std::vector<TheoryPoint>& pts,
                        const std::vector<std::string>& comments) {
  CsvWriter w(path,
              {"lambda", "expected_phi", "p_upper", "p_lower", "theta_from_upper",
               "theta_from_lower", "estimated"},
              comments);
  for (const auto& p : pts) {
    w.row({format_double(p.lambda), format_double(p.expected_phi), format_double(p.p_upper),
           format_double(p.p_lower), format_double(p.theta_from_upper),
           format_double(p.theta_from_lower), p.estimated ? "1" : "0"});
  }
}

}  // namespace vanet
