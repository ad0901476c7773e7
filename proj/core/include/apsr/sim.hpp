#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apsr/balls_bins.hpp"
#include "apsr/controller.hpp"
#include "apsr/model.hpp"
#include "apsr/policy.hpp"
#include "apsr/workload.hpp"

namespace apsr {

/// Everything that determines one simulation run.
struct ExperimentConfig {
  std::string dataset = "nfv";       // built-in table name, ignored if dataset_file is set
  std::string dataset_file;          // optional path to a user table
  std::int64_t replicas = 30;
  std::int64_t hosts = 837;

  ArrivalProcess arrivals;
  double lambda_d = 0.0;             // > 0: Poisson departures of random placed requests
  Lifetime lifetime;                 // fixed per-request lifetime (infinite by default)

  PolicyConfig policy;
  std::int64_t schedulers = 0;       // fixed fleet size; 0 means controller-managed
  std::int64_t sample_size = 0;      // d for fixed-fleet APSR agents; 0 means floor(B/s)

  double delta_hat = 0.05;
  std::int64_t budget = 0;           // absolute B; 0 means budget_fraction * hosts
  double budget_fraction = 1.0;
  std::int64_t period = 10;          // T
  double alpha = 0.1;
  EstimatorMode estimator = EstimatorMode::kMin;

  std::uint64_t seed = 1;
  std::uint64_t max_slots = 2'000'000;

  [[nodiscard]] bool controller_managed() const { return schedulers == 0; }
  [[nodiscard]] std::int64_t resolved_budget() const;
  void validate() const;
};

/// Hosts, flavors, the ordered trace, and per-slot arrival counts.
struct Workload {
  std::vector<Host> hosts;
  std::vector<Flavor> flavors;
  std::vector<Request> trace;
  std::vector<std::uint32_t> arrivals;
};

[[nodiscard]] Workload build_workload(const ExperimentConfig& config);

struct SlotMetrics {
  Slot slot = 0;
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t decline_no_host = 0;
  std::uint64_t decline_collision = 0;
  std::uint64_t queries = 0;             // by schedulers
  std::uint64_t controller_queries = 0;  // census cost in oracle mode
  std::uint64_t active_schedulers = 0;
  std::int64_t s = 0;                    // configured fleet size this slot
  std::int64_t d = 0;                    // configured sample size (0 for snapshot policies)
  double k_estimate = 0.0;
  std::uint64_t pending = 0;             // queue length after the slot
  double utilization = 0.0;              // mean over resources of used / capacity, after the slot
};

struct RunMetrics {
  std::uint64_t slots = 0;
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t decline_no_host = 0;
  std::uint64_t decline_collision = 0;
  std::uint64_t scheduler_queries = 0;
  std::uint64_t controller_queries = 0;
  bool truncated = false;

  [[nodiscard]] std::uint64_t total_queries() const { return scheduler_queries + controller_queries; }
  /// Failed attempts over attempts; 0 when nothing was attempted.
  [[nodiscard]] double decline_ratio() const;
  /// Successful placements per slot.
  [[nodiscard]] double throughput() const;
  /// Mean number of schedulers that handled a request per slot.
  [[nodiscard]] double mean_active() const;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<SlotMetrics> series;
};

/// The time-slotted loop. Each slot: departures, arrivals, controller tick
/// (every T slots), parallel decisions against the slot-start state, then
/// resolution of all assignments against live capacity in a random order.
/// Declined requests are not retried.
class Simulation {
 public:
  Simulation(ExperimentConfig config, Workload workload);

  SlotMetrics run_slot();
  [[nodiscard]] bool finished() const;
  RunResult run();

  [[nodiscard]] const ClusterState& state() const { return state_; }
  [[nodiscard]] const ExperimentConfig& config() const { return config_; }
  [[nodiscard]] const std::optional<Controller>& controller() const { return controller_; }
  /// Host each scheduler chose in the last slot (nullopt = no-host decline),
  /// indexed by scheduler.
  [[nodiscard]] const std::vector<std::optional<HostId>>& last_choices() const { return last_choices_; }

  /// Evaluates schedulers in reverse index order. Choices must not change.
  void set_reverse_decision_order(bool reverse) { reverse_decisions_ = reverse; }

 private:
  ExperimentConfig config_;
  Workload workload_;
  ClusterState state_;
  std::optional<Controller> controller_;
  FlavorCounters counters_;
  std::size_t next_request_ = 0;
  std::int64_t budget_;
  std::vector<std::optional<HostId>> last_choices_;
  std::vector<Host> sample_scratch_;
  bool reverse_decisions_ = false;
};

[[nodiscard]] RunResult run_experiment(const ExperimentConfig& config);

}  // namespace apsr
