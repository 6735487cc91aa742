#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vanet/rsu.hpp"
#include "vanet/traffic.hpp"

namespace vanet {

/// Everything one experiment cell needs: the traffic configuration, the
/// radio range, optional roadside units and the replicate seeds.
struct ScenarioConfig {
  SimConfig sim;
  double range = 100.0;
  std::optional<RsuPlacement> rsu;
  double rsu_range = 0.0;  // 0 means "same as range"
  std::filesystem::path rsu_file;  // positions for the custom policy
  double sample_interval = 5.0;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path out_dir;  // empty: no artifact files
  bool write_snapshots = true;
  bool write_clusters = true;

  /// "NL-A", "SL-R", ... from the regime and destination policy.
  std::string tag() const;
  /// Sets regime and destination policy from a tag.
  void set_tag(std::string_view tag);
  double effective_rsu_range() const { return rsu_range > 0.0 ? rsu_range : range; }

  /// Throws ConfigError. GW-R is rejected.
  void validate() const;
};

/// Applies one key=value setting. Throws ConfigError for unknown keys or
/// malformed values.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Reads a flat key=value file ('#' starts a comment). Throws IoError if the
/// file cannot be read and ConfigError for bad content.
std::vector<std::pair<std::string, std::string>> read_settings(const std::filesystem::path& path);
std::vector<std::pair<std::string, std::string>> parse_settings(std::string_view text);

ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Resolved configuration as space-separated key=value pairs, parseable by
/// parse_settings after replacing spaces with newlines.
std::string describe(const ScenarioConfig& cfg);

std::string_view rsu_label(const std::optional<RsuPlacement>& p);

}  // namespace vanet
