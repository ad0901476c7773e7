#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "apsr/balls_bins.hpp"
#include "apsr/model.hpp"

namespace apsr {

/// How the controller obtains k:
///   min    - n times the smallest per-flavor found/queried ratio, smoothed
///   avg    - n times the mean of those ratios, smoothed
///   oracle - exact minimum census of the cluster, unsmoothed
enum class EstimatorMode { kMin, kAvg, kOracle };

[[nodiscard]] std::string_view to_string(EstimatorMode mode);
[[nodiscard]] EstimatorMode parse_estimator_mode(std::string_view name);

/// Per-flavor totals of hosts queried and hosts found available, summed over
/// all schedulers since the last controller tick.
class FlavorCounters {
 public:
  explicit FlavorCounters(std::size_t flavor_count = 0) : queried_(flavor_count, 0), found_(flavor_count, 0) {}

  void record(FlavorId flavor, std::uint64_t queried, std::uint64_t found);
  void merge(const FlavorCounters& other);
  void reset();

  [[nodiscard]] std::size_t flavor_count() const { return queried_.size(); }
  [[nodiscard]] std::uint64_t queried(FlavorId f) const { return queried_[f]; }
  [[nodiscard]] std::uint64_t found(FlavorId f) const { return found_[f]; }

 private:
  std::vector<std::uint64_t> queried_;
  std::vector<std::uint64_t> found_;
};

/// One EstimateK step: alpha * k_tilde + (1 - alpha) * prev_k, where k_tilde
/// is n times the min (or mean) found/queried ratio over flavors that were
/// queried at all. With no queried flavor, prev_k is returned unchanged.
/// Oracle mode is not a counter estimator and is rejected.
[[nodiscard]] double estimate_k(const FlavorCounters& counters, double prev_k, double alpha, std::int64_t n,
                                EstimatorMode mode);

struct ControllerParams {
  std::int64_t n = 1;
  bb::SlaBudget sla;
  std::int64_t period = 10;  // T, slots between reconfigurations
  double alpha = 0.1;
  EstimatorMode mode = EstimatorMode::kMin;

  void validate() const;
};

/// Periodic fleet controller: estimates k, then sizes the scheduler fleet
/// with max_paral. Starts from k = n and a single scheduler querying B hosts.
class Controller {
 public:
  explicit Controller(const ControllerParams& params);

  [[nodiscard]] bool due(Slot t) const { return t % static_cast<Slot>(params_.period) == 0; }

  /// Reconfigures from scheduler counters (min/avg modes). Resets counters.
  bb::Config tick(FlavorCounters& counters);
  /// Reconfigures from an exact census (oracle mode).
  bb::Config tick(const AvailabilityCensus& exact);

  [[nodiscard]] const ControllerParams& params() const { return params_; }
  [[nodiscard]] double k_estimate() const { return k_estimate_; }
  /// The integer k handed to max_paral on the last tick.
  [[nodiscard]] std::int64_t k_used() const { return k_used_; }
  [[nodiscard]] bb::Config config() const { return config_; }

 private:
  bb::Config reconfigure();

  ControllerParams params_;
  double k_estimate_;
  std::int64_t k_used_;
  bb::Config config_;
};

}  // namespace apsr
