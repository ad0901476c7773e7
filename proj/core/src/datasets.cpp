// Embedded dataset tables. Zero-count cells of the source tables are omitted.

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "apsr/error.hpp"
#include "apsr/workload.hpp"

namespace apsr {
namespace {

constexpr std::string_view kNfv = R"(# NFV MANO flavors, <memory, storage> normalized to the host capacity.
name nfv
resources memory storage
host 1 1 1
# memory storage count
0.001 0.01 14
0.001 0.04 22
0.001 0.1 14
0.001 0.3 3
0.001 0.54 13
0.016 0.01 7
0.016 0.04 93
0.016 0.3 2
0.032 0.01 83
0.032 0.04 165
0.032 0.3 14
0.064 0.01 1
0.064 0.04 1
0.064 0.1 1
0.19 0.04 2
0.19 0.54 2
)";

constexpr std::string_view kGoogle = R"(# Google cluster VM sizes, <cpu, memory>.
name google
resources cpu memory
host 1 2 1
host 2 1 1
# cpu memory count
0.5 0.125 60
0.25 0.25 123
0.5 0.25 3835
0.5 0.5 6672
1 0.5 3
0.5 0.75 992
0.5 1 4
1 1 788
)";

constexpr std::string_view kAmazon = R"(# Amazon EC2 instance types, <cpu, memory>; small = cpu below 0.4.
name amazon
resources cpu memory
host 1 2 1
host 2 1 1
class small 1000
class large 100
# cpu memory weight class
0.035 0.008 1 small
0.07 0.016 1 small
0.083 0.031 1 small
0.1 0.008 1 small
0.142 0.031 1 small
0.167 0.063 1 small
0.2 0.016 1 small
0.333 0.125 1 small
0.354 0.062 1 small
0.4 0.031 1 large
0.5 0.125 1 large
0.5 0.5 1 large
0.8 0.063 1 large
0.833 0.25 1 large
1 0.25 1 large
)";

constexpr std::array<std::pair<std::string_view, std::string_view>, 3> kTables{{
    {"nfv", kNfv},
    {"google", kGoogle},
    {"amazon", kAmazon},
}};

struct HostPreset {
  std::string_view dataset;
  std::int64_t eval;
  std::int64_t study;
};

constexpr std::array<HostPreset, 3> kHostPresets{{
    {"nfv", 837, 279},
    {"google", 5989, 5989},
    {"amazon", 876, 126},
}};

}  // namespace

std::vector<std::string> builtin_dataset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : kTables) names.emplace_back(name);
  return names;
}

std::string_view builtin_dataset_text(std::string_view name) {
  for (const auto& [n, text] : kTables) {
    if (n == name) return text;
  }
  throw ConfigError("unknown dataset '" + std::string(name) + "' (expected nfv, google, amazon)");
}

DatasetSpec builtin_dataset(std::string_view name) { return parse_dataset(builtin_dataset_text(name)); }

std::int64_t preset_host_count(std::string_view dataset, std::string_view preset) {
  for (const HostPreset& p : kHostPresets) {
    if (p.dataset != dataset) continue;
    if (preset == "eval") return p.eval;
    if (preset == "study") return p.study;
    throw ConfigError("unknown host preset '" + std::string(preset) + "' (expected eval or study)");
  }
  throw ConfigError("no host presets for dataset '" + std::string(dataset) + "'");
}

}  // namespace apsr
