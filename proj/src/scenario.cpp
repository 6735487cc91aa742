#include "vanet/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vanet/csv.hpp"
#include "vanet/errors.hpp"

namespace vanet {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double number(std::string_view key, std::string_view v) {
  try {
    return parse_double(v);
  } catch (const IoError&) {
    throw ConfigError("setting '" + std::string(key) + "' expects a number, got '" +
                      std::string(v) + "'");
  }
}

long long integer(std::string_view key, std::string_view v) {
  try {
    return parse_int(v);
  } catch (const IoError&) {
    throw ConfigError("setting '" + std::string(key) + "' expects an integer, got '" +
                      std::string(v) + "'");
  }
}

bool boolean(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("setting '" + std::string(key) + "' expects true or false");
}

std::uint64_t seed_value(std::string_view key, std::string_view v) {
  const long long s = integer(key, v);
  if (s < 0) throw ConfigError("seeds must be non-negative");
  return static_cast<std::uint64_t>(s);
}

template <typename Fn>
auto translate(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::string ScenarioConfig::tag() const {
  return std::string(to_string(sim.regime)) + "-" + std::string(to_string(sim.destination));
}

void ScenarioConfig::set_tag(std::string_view t) {
  const auto dash = t.find('-');
  if (dash == std::string_view::npos) {
    throw ConfigError("scenario tag must look like NL-A, got '" + std::string(t) + "'");
  }
  translate([&] {
    sim.regime = parse_regime(t.substr(0, dash));
    sim.destination = parse_destination(t.substr(dash + 1));
    return 0;
  });
}

void ScenarioConfig::validate() const {
  translate([&] {
    sim.validate();
    return 0;
  });
  if (sim.regime == Regime::GreenWave && sim.destination == DestinationPolicy::Random) {
    throw ConfigError("GW-R is not a supported scenario");
  }
  if (!(range > 0.0)) throw ConfigError("range must be positive");
  if (rsu_range < 0.0) throw ConfigError("rsu_range must be >= 0");
  if (!(sample_interval >= sim.dt)) throw ConfigError("sample_interval must be >= dt");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (rsu == RsuPlacement::Custom && rsu_file.empty()) {
    throw ConfigError("custom RSU placement needs rsu_file");
  }
}

std::string_view rsu_label(const std::optional<RsuPlacement>& p) {
  return p ? to_string(*p) : std::string_view("none");
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  auto& s = cfg.sim;
  auto& d = s.driver;
  const std::string_view v = trim(value);
  if (key == "tag" || key == "scenario") {
    cfg.set_tag(v);
  } else if (key == "regime") {
    s.regime = translate([&] { return parse_regime(v); });
  } else if (key == "dest" || key == "destination") {
    s.destination = translate([&] { return parse_destination(v); });
  } else if (key == "f" || key == "flow") {
    s.flow = number(key, v);
  } else if (key == "rho") {
    s.rho = number(key, v);
  } else if (key == "r" || key == "range") {
    cfg.range = number(key, v);
  } else if (key == "grid_n" || key == "n") {
    s.grid_n = static_cast<int>(integer(key, v));
  } else if (key == "L" || key == "segment_length") {
    s.segment_length = number(key, v);
  } else if (key == "dt") {
    s.dt = number(key, v);
  } else if (key == "duration") {
    s.duration = number(key, v);
  } else if (key == "warmup") {
    s.warmup = number(key, v);
  } else if (key == "cycle") {
    s.cycle = number(key, v);
  } else if (key == "green_horizontal") {
    s.green_horizontal = number(key, v);
  } else if (key == "v_max") {
    d.v_max = number(key, v);
  } else if (key == "accel") {
    d.accel = number(key, v);
  } else if (key == "decel") {
    d.decel = number(key, v);
  } else if (key == "length") {
    d.length = number(key, v);
  } else if (key == "min_gap") {
    d.min_gap = number(key, v);
  } else if (key == "sigma") {
    d.sigma = number(key, v);
  } else if (key == "turn_speed") {
    d.turn_speed = number(key, v);
  } else if (key == "yield_window") {
    d.yield_window = number(key, v);
  } else if (key == "reroute_period") {
    s.routing.reroute_period = number(key, v);
  } else if (key == "ema_alpha") {
    s.routing.ema_alpha = number(key, v);
  } else if (key == "turn_penalty") {
    s.routing.turn_penalty = number(key, v);
  } else if (key == "rsu") {
    if (v == "none") {
      cfg.rsu.reset();
    } else {
      cfg.rsu = translate([&] { return parse_rsu_placement(v); });
    }
  } else if (key == "rsu_range") {
    cfg.rsu_range = number(key, v);
  } else if (key == "rsu_file") {
    cfg.rsu_file = std::string(v);
  } else if (key == "sample_interval") {
    cfg.sample_interval = number(key, v);
  } else if (key == "seed") {
    cfg.seeds = {seed_value(key, v)};
  } else if (key == "seeds") {
    cfg.seeds.clear();
    std::string_view rest = v;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      cfg.seeds.push_back(seed_value(key, trim(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  } else if (key == "out") {
    cfg.out_dir = std::string(v);
  } else if (key == "snapshots") {
    cfg.write_snapshots = boolean(key, v);
  } else if (key == "clusters") {
    cfg.write_clusters = boolean(key, v);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_settings(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_settings(ss.str());
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  ScenarioConfig cfg;
  for (const auto& [k, v] : read_settings(path)) apply_setting(cfg, k, v);
  return cfg;
}

std::string describe(const ScenarioConfig& cfg) {
  const auto& s = cfg.sim;
  const auto& d = s.driver;
  std::string seeds;
  for (auto seed : cfg.seeds) {
    if (!seeds.empty()) seeds += ',';
    seeds += std::to_string(seed);
  }
  std::ostringstream os;
  os << "tag=" << cfg.tag() << " f=" << format_double(s.flow) << " rho=" << format_double(s.rho)
     << " r=" << format_double(cfg.range) << " grid_n=" << s.grid_n
     << " L=" << format_double(s.segment_length) << " dt=" << format_double(s.dt)
     << " duration=" << format_double(s.duration) << " warmup=" << format_double(s.warmup)
     << " cycle=" << format_double(s.cycle)
     << " green_horizontal=" << format_double(s.green_horizontal)
     << " v_max=" << format_double(d.v_max) << " accel=" << format_double(d.accel)
     << " decel=" << format_double(d.decel) << " length=" << format_double(d.length)
     << " min_gap=" << format_double(d.min_gap) << " sigma=" << format_double(d.sigma)
     << " turn_speed=" << format_double(d.turn_speed)
     << " yield_window=" << format_double(d.yield_window)
     << " reroute_period=" << format_double(s.routing.reroute_period)
     << " ema_alpha=" << format_double(s.routing.ema_alpha)
     << " turn_penalty=" << format_double(s.routing.turn_penalty) << " rsu=" << rsu_label(cfg.rsu)
     << " rsu_range=" << format_double(cfg.effective_rsu_range())
     << " sample_interval=" << format_double(cfg.sample_interval) << " seeds=" << seeds;
  if (!cfg.rsu_file.empty()) os << " rsu_file=" << cfg.rsu_file.string();
  return os.str();
}

}  // namespace vanet
