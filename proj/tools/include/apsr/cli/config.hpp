#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "apsr/sim.hpp"

namespace apsr::cli {

/// Flat key = value settings. Later layers override earlier ones:
/// built-in defaults, then a preset, then a config file, then --set flags.
using Settings = std::map<std::string, std::string>;

/// Every key the simulate command understands, in canonical order.
[[nodiscard]] const std::vector<std::string>& known_keys();

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed lines are ConfigErrors.
[[nodiscard]] Settings parse_settings(std::string_view text);
[[nodiscard]] Settings load_settings_file(const std::filesystem::path& path);
/// Parses one `key=value` override.
void apply_override(Settings& settings, std::string_view assignment);

[[nodiscard]] std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown preset.
[[nodiscard]] Settings preset(std::string_view name);
[[nodiscard]] Settings default_settings();

/// Layers `overlay` on top of `base`.
[[nodiscard]] Settings merge(Settings base, const Settings& overlay);

[[nodiscard]] ExperimentConfig to_experiment(const Settings& settings);
/// Canonical, fully resolved echo of a config (hosts and budget as numbers).
/// to_experiment(to_settings(c)) reproduces c.
[[nodiscard]] Settings to_settings(const ExperimentConfig& config);
[[nodiscard]] std::string format_settings(const Settings& settings);

/// Seed lists: "7", "1,4,9", or an inclusive range "1..10".
[[nodiscard]] std::vector<std::uint64_t> parse_seed_list(std::string_view text);
/// k grids for analyze: "all", "5", "0,10,20", or "lo:hi[:step]" inclusive.
[[nodiscard]] std::vector<std::int64_t> parse_k_grid(std::string_view text, std::int64_t n);

}  // namespace apsr::cli
