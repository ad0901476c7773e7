#include "apsr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "apsr/error.hpp"
#include "apsr/rng.hpp"

namespace apsr {
namespace {

// Stream tags for derive_seed; each random decision in a run draws from its
// own stream so that reordering one part of a slot cannot perturb another.
constexpr std::uint64_t kTraceStream = 1;
constexpr std::uint64_t kArrivalStream = 2;
constexpr std::uint64_t kDepartureStream = 3;
constexpr std::uint64_t kSchedulerStream = 4;
constexpr std::uint64_t kResolutionStream = 5;

double utilization_of(const ClusterState& state, const ResourceVector& capacity_total) {
  const ResourceVector used = state.used_total();
  double sum = 0.0;
  for (std::size_t j = 0; j < used.dims(); ++j) {
    sum += static_cast<double>(used.units(j)) / static_cast<double>(capacity_total.units(j));
  }
  return sum / static_cast<double>(used.dims());
}

}  // namespace

std::int64_t ExperimentConfig::resolved_budget() const {
  if (budget > 0) return budget;
  const auto b = static_cast<std::int64_t>(std::floor(budget_fraction * static_cast<double>(hosts) + 1e-9));
  return std::max<std::int64_t>(1, b);
}

void ExperimentConfig::validate() const {
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  if (hosts < 1) throw ConfigError("hosts must be >= 1");
  arrivals.validate();
  if (!(lambda_d >= 0.0)) throw ConfigError("lambda_d must be >= 0");
  policy.validate();
  if (schedulers < 0) throw ConfigError("s must be >= 0 (0 selects the controller)");
  if (sample_size < 0) throw ConfigError("d must be >= 0");
  if (!(delta_hat >= 0.0 && delta_hat <= 1.0)) throw ConfigError("delta_hat must lie in [0, 1]");
  if (budget < 0) throw ConfigError("budget must be >= 0");
  if (!(budget_fraction > 0.0)) throw ConfigError("budget fraction must be > 0");
  if (period < 1) throw ConfigError("T must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (max_slots < 1) throw ConfigError("max_slots must be >= 1");
  if (controller_managed() && policy.kind != PolicyKind::kApsrAgent) {
    throw ConfigError("a controller-managed fleet requires policy = apsr; set s for other policies");
  }
  if (!controller_managed() && policy.kind == PolicyKind::kApsrAgent && sample_size == 0 &&
      resolved_budget() / schedulers < 1) {
    throw ConfigError("fixed APSR fleet has floor(B/s) = 0 samples per request; set d");
  }
}

Workload build_workload(const ExperimentConfig& config) {
  config.validate();
  const DatasetSpec spec = config.dataset_file.empty() ? builtin_dataset(config.dataset)
                                                       : load_dataset_file(config.dataset_file);
  Workload w;
  w.hosts = build_hosts(spec, config.hosts);
  w.flavors = spec.flavor_set();
  w.trace = build_trace(spec, config.replicas, derive_seed(config.seed, {kTraceStream}));
  w.arrivals = build_arrivals(config.arrivals, w.trace.size(), derive_seed(config.seed, {kArrivalStream}));
  return w;
}

double RunMetrics::decline_ratio() const {
  if (attempts == 0) return 0.0;
  return static_cast<double>(attempts - successes) / static_cast<double>(attempts);
}

double RunMetrics::throughput() const {
  if (slots == 0) return 0.0;
  return static_cast<double>(successes) / static_cast<double>(slots);
}

double RunMetrics::mean_active() const {
  if (slots == 0) return 0.0;
  return static_cast<double>(attempts) / static_cast<double>(slots);
}

Simulation::Simulation(ExperimentConfig config, Workload workload)
    : config_(std::move(config)),
      workload_(std::move(workload)),
      state_(workload_.hosts, workload_.flavors),
      counters_(workload_.flavors.size()) {
  config_.validate();
  budget_ = config_.resolved_budget();
  if (config_.controller_managed()) {
    ControllerParams params;
    params.n = static_cast<std::int64_t>(workload_.hosts.size());
    params.sla = {config_.delta_hat, budget_};
    params.period = config_.period;
    params.alpha = config_.alpha;
    params.mode = config_.estimator;
    controller_.emplace(params);
  }
}

bool Simulation::finished() const {
  return next_request_ >= workload_.trace.size() && state_.pending().empty();
}

SlotMetrics Simulation::run_slot() {
  SlotMetrics m;
  const Slot t = state_.slot();
  m.slot = t;
  const auto n = static_cast<std::int64_t>(state_.hosts().size());

  // (1) departures
  m.departures += state_.complete_due(t);
  if (config_.lambda_d > 0.0) {
    Rng rng(derive_seed(config_.seed, {kDepartureStream, t}));
    std::poisson_distribution<std::uint64_t> leaving(config_.lambda_d);
    const std::uint64_t want = leaving(rng);
    for (std::uint64_t i = 0; i < want && state_.placed_count() > 0; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, state_.placed_count() - 1);
      state_.complete(state_.placed_at(pick(rng)));
      ++m.departures;
    }
  }

  // (2) arrivals
  if (t < workload_.arrivals.size()) {
    for (std::uint32_t i = 0; i < workload_.arrivals[t] && next_request_ < workload_.trace.size(); ++i) {
      Request r = workload_.trace[next_request_++];
      r.arrival_slot = t;
      r.lifetime = config_.lifetime;
      state_.pending().push_back(r);
      ++m.arrivals;
    }
  }

  // (3) fleet configuration
  std::int64_t s = config_.schedulers;
  std::int64_t d = 0;
  if (controller_) {
    if (controller_->due(t)) {
      if (config_.estimator == EstimatorMode::kOracle) {
        controller_->tick(census(state_));
        m.controller_queries = static_cast<std::uint64_t>(n);
      } else {
        controller_->tick(counters_);
      }
    }
    s = controller_->config().s;
    d = controller_->config().d;
    m.k_estimate = controller_->k_estimate();
  } else if (config_.policy.kind == PolicyKind::kApsrAgent) {
    d = config_.sample_size > 0 ? config_.sample_size : budget_ / s;
  }
  m.s = s;
  m.d = d;

  // (4) parallel decisions; the cluster is not mutated until resolution, so
  // every scheduler sees the slot-start state.
  const auto active = std::min<std::size_t>(static_cast<std::size_t>(s), state_.pending().size());
  std::vector<Request> requests(state_.pending().begin(), state_.pending().begin() + static_cast<std::ptrdiff_t>(active));
  state_.pending().erase(state_.pending().begin(), state_.pending().begin() + static_cast<std::ptrdiff_t>(active));
  last_choices_.assign(active, std::nullopt);

  std::vector<std::size_t> order(active);
  std::iota(order.begin(), order.end(), 0);
  if (reverse_decisions_) std::ranges::reverse(order);

  const auto hosts = state_.hosts();
  for (const std::size_t i : order) {
    Rng rng(derive_seed(config_.seed, {kSchedulerStream, t, i}));
    const Flavor& flavor = state_.flavor(requests[i].flavor);
    if (config_.policy.needs_full_snapshot()) {
      last_choices_[i] = choose(config_.policy, HostView{hosts, ViewKind::kFullSnapshot}, flavor.demand, rng);
      m.queries += static_cast<std::uint64_t>(n);
    } else {
      std::uniform_int_distribution<std::int64_t> draw(0, n - 1);
      sample_scratch_.clear();
      std::uint64_t found = 0;
      for (std::int64_t q = 0; q < d; ++q) {
        const Host& h = hosts[static_cast<std::size_t>(draw(rng))];
        found += is_available(h, flavor) ? 1 : 0;
        sample_scratch_.push_back(h);
      }
      counters_.record(flavor.id, static_cast<std::uint64_t>(d), found);
      last_choices_[i] = choose(config_.policy, HostView{sample_scratch_, ViewKind::kSample}, flavor.demand, rng);
      m.queries += static_cast<std::uint64_t>(d);
    }
  }

  // (5) resolution against live capacity in a random order
  std::vector<std::size_t> assigned;
  for (std::size_t i = 0; i < active; ++i) {
    if (last_choices_[i]) assigned.push_back(i);
  }
  Rng resolve_rng(derive_seed(config_.seed, {kResolutionStream, t}));
  std::shuffle(assigned.begin(), assigned.end(), resolve_rng);
  for (const std::size_t i : assigned) {
    if (state_.place(requests[i], *last_choices_[i]) == PlaceOutcome::kPlaced) {
      ++m.successes;
    } else {
      ++m.decline_collision;
    }
  }

  // (6) bookkeeping
  m.active_schedulers = active;
  m.attempts = active;
  m.decline_no_host = active - assigned.size();
  m.pending = state_.pending().size();
  m.utilization = utilization_of(state_, state_.capacity_total());
  state_.set_slot(t + 1);
  return m;
}

RunResult Simulation::run() {
  RunResult result;
  RunMetrics& r = result.metrics;
  while (!finished() && state_.slot() < config_.max_slots) {
    const SlotMetrics m = run_slot();
    r.attempts += m.attempts;
    r.successes += m.successes;
    r.decline_no_host += m.decline_no_host;
    r.decline_collision += m.decline_collision;
    r.scheduler_queries += m.queries;
    r.controller_queries += m.controller_queries;
    result.series.push_back(m);
  }
  r.slots = result.series.size();
  r.truncated = !finished();
  return result;
}

RunResult run_experiment(const ExperimentConfig& config) {
  return Simulation(config, build_workload(config)).run();
}

}  // namespace apsr
