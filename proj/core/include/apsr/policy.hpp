#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "apsr/model.hpp"
#include "apsr/rng.hpp"

namespace apsr {

enum class PolicyKind {
  kFirstFit,
  kWorstFit,
  kRandom,
  kFirstFitRand,
  kWorstFitRand,
  kAdaptive,
  kDistFromDiag,
  kApsrAgent,
};

/// Config-file spelling: "ff", "wf", "random", "ffr", "wfr", "adaptive",
/// "distfromdiag", "apsr".
[[nodiscard]] std::string_view to_string(PolicyKind kind);
[[nodiscard]] PolicyKind parse_policy_kind(std::string_view name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kRandom;
  int lambda_rank = 5;              // FFR / WFR candidate count
  double adaptive_threshold = 0.6;  // Adaptive switches WF -> FF at this mean load

  void validate() const;
  [[nodiscard]] bool needs_full_snapshot() const { return kind != PolicyKind::kApsrAgent; }
};

enum class ViewKind { kFullSnapshot, kSample };

/// What one scheduler observed before deciding. In sample mode entries may
/// repeat (with-replacement sampling).
struct HostView {
  std::span<const Host> entries;
  ViewKind kind = ViewKind::kFullSnapshot;
};

/// Pessimistic load: max over resources of used/capacity.
/// Throws ConfigError for a zero-capacity coordinate.
[[nodiscard]] double host_load(const Host& h);

/// Distance of the host's normalized usage vector, after hypothetically
/// adding `demand`, from the all-equal diagonal.
[[nodiscard]] double diagonal_distance_after(const Host& h, const ResourceVector& demand);

/// Mean host_load over the view.
[[nodiscard]] double mean_load(std::span<const Host> hosts);

/// Picks a host from the view for a request of the given demand, or nullopt
/// when no host in the view is available. Only APSR agents accept sample
/// views; other kinds throw ConfigError on one.
[[nodiscard]] std::optional<HostId> choose(const PolicyConfig& policy, const HostView& view,
                                           const ResourceVector& demand, Rng& rng);

}  // namespace apsr
