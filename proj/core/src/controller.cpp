#include "apsr/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "apsr/error.hpp"

namespace apsr {

std::string_view to_string(EstimatorMode mode) {
  switch (mode) {
    case EstimatorMode::kMin:
      return "min";
    case EstimatorMode::kAvg:
      return "avg";
    case EstimatorMode::kOracle:
      return "oracle";
  }
  return "unknown";
}

EstimatorMode parse_estimator_mode(std::string_view name) {
  if (name == "min") return EstimatorMode::kMin;
  if (name == "avg") return EstimatorMode::kAvg;
  if (name == "oracle") return EstimatorMode::kOracle;
  throw ConfigError("unknown estimator '" + std::string(name) + "' (expected min, avg, oracle)");
}

void FlavorCounters::record(FlavorId flavor, std::uint64_t queried, std::uint64_t found) {
  if (flavor >= queried_.size()) throw ModelError("counter for unknown flavor " + std::to_string(flavor));
  if (found > queried) throw ModelError("found more available hosts than were queried");
  queried_[flavor] += queried;
  found_[flavor] += found;
}

void FlavorCounters::merge(const FlavorCounters& other) {
  if (other.flavor_count() != flavor_count()) throw ModelError("merging counters of different flavor sets");
  for (std::size_t i = 0; i < queried_.size(); ++i) {
    queried_[i] += other.queried_[i];
    found_[i] += other.found_[i];
  }
}

void FlavorCounters::reset() {
  std::ranges::fill(queried_, 0);
  std::ranges::fill(found_, 0);
}

double estimate_k(const FlavorCounters& counters, double prev_k, double alpha, std::int64_t n,
                  EstimatorMode mode) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must lie in (0, 1]");
  if (n < 1) throw ArgumentError("n must be >= 1");
  if (mode == EstimatorMode::kOracle) throw ArgumentError("oracle mode does not estimate from counters");

  double min_ratio = std::numeric_limits<double>::infinity();
  double sum_ratio = 0.0;
  std::size_t observed = 0;
  for (FlavorId f = 0; f < counters.flavor_count(); ++f) {
    if (counters.queried(f) == 0) continue;
    const double ratio = static_cast<double>(counters.found(f)) / static_cast<double>(counters.queried(f));
    min_ratio = std::min(min_ratio, ratio);
    sum_ratio += ratio;
    ++observed;
  }
  if (observed == 0) return prev_k;

  const double ratio = mode == EstimatorMode::kMin ? min_ratio : sum_ratio / static_cast<double>(observed);
  const double k_tilde = static_cast<double>(n) * ratio;
  return alpha * k_tilde + (1.0 - alpha) * prev_k;
}

void ControllerParams::validate() const {
  if (n < 1) throw ConfigError("controller: n must be >= 1");
  if (period < 1) throw ConfigError("controller: period T must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("controller: alpha must lie in (0, 1]");
  if (!(sla.delta_hat >= 0.0 && sla.delta_hat <= 1.0)) throw ConfigError("controller: delta_hat must lie in [0, 1]");
  if (sla.budget < 1) throw ConfigError("controller: budget must be >= 1");
}

Controller::Controller(const ControllerParams& params)
    : params_(params),
      k_estimate_(static_cast<double>(params.n)),
      k_used_(params.n),
      config_{1, params.sla.budget} {
  params_.validate();
}

bb::Config Controller::tick(FlavorCounters& counters) {
  if (params_.mode == EstimatorMode::kOracle) throw ModelError("oracle controller must tick from a census");
  k_estimate_ = estimate_k(counters, k_estimate_, params_.alpha, params_.n, params_.mode);
  counters.reset();
  return reconfigure();
}

bb::Config Controller::tick(const AvailabilityCensus& exact) {
  if (params_.mode != EstimatorMode::kOracle) throw ModelError("only the oracle controller ticks from a census");
  k_estimate_ = static_cast<double>(exact.min());
  return reconfigure();
}

bb::Config Controller::reconfigure() {
  k_estimate_ = std::clamp(k_estimate_, 0.0, static_cast<double>(params_.n));
  // The slack keeps a fixed point such as 0.1*n + 0.9*n from flooring to n-1.
  k_used_ = std::min(params_.n, static_cast<std::int64_t>(std::floor(k_estimate_ + 1e-9)));
  config_ = bb::max_paral(params_.n, params_.sla.delta_hat, params_.sla.budget, k_used_);
  return config_;
}

}  // namespace apsr
