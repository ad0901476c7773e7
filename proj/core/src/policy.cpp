#include "apsr/policy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "apsr/error.hpp"

namespace apsr {
namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 8> kNames{{
    {PolicyKind::kFirstFit, "ff"},
    {PolicyKind::kWorstFit, "wf"},
    {PolicyKind::kRandom, "random"},
    {PolicyKind::kFirstFitRand, "ffr"},
    {PolicyKind::kWorstFitRand, "wfr"},
    {PolicyKind::kAdaptive, "adaptive"},
    {PolicyKind::kDistFromDiag, "distfromdiag"},
    {PolicyKind::kApsrAgent, "apsr"},
}};

template <typename T>
T pick_uniform(const std::vector<T>& items, Rng& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
  return items[dist(rng)];
}

std::optional<HostId> first_fit(std::span<const Host> hosts, const ResourceVector& demand) {
  std::optional<HostId> best;
  for (const Host& h : hosts) {
    if (is_available(h, demand) && (!best || h.id < *best)) best = h.id;
  }
  return best;
}

std::optional<HostId> worst_fit(std::span<const Host> hosts, const ResourceVector& demand) {
  std::optional<std::pair<double, HostId>> best;
  for (const Host& h : hosts) {
    if (!is_available(h, demand)) continue;
    const std::pair<double, HostId> key{host_load(h), h.id};
    if (!best || key < *best) best = key;
  }
  if (!best) return std::nullopt;
  return best->second;
}

std::optional<HostId> dist_from_diag(std::span<const Host> hosts, const ResourceVector& demand) {
  std::optional<std::pair<double, HostId>> best;
  for (const Host& h : hosts) {
    if (!is_available(h, demand)) continue;
    const std::pair<double, HostId> key{diagonal_distance_after(h, demand), h.id};
    if (!best || key < *best) best = key;
  }
  if (!best) return std::nullopt;
  return best->second;
}

std::optional<HostId> random_available(std::span<const Host> hosts, const ResourceVector& demand, Rng& rng) {
  std::vector<HostId> candidates;
  for (const Host& h : hosts) {
    if (is_available(h, demand)) candidates.push_back(h.id);
  }
  if (candidates.empty()) return std::nullopt;
  return pick_uniform(candidates, rng);
}

std::optional<HostId> first_fit_rand(std::span<const Host> hosts, const ResourceVector& demand, int lambda,
                                     Rng& rng) {
  std::vector<HostId> candidates;
  for (const Host& h : hosts) {
    if (is_available(h, demand)) candidates.push_back(h.id);
  }
  if (candidates.empty()) return std::nullopt;
  const auto top = std::min(candidates.size(), static_cast<std::size_t>(lambda));
  std::ranges::partial_sort(candidates, candidates.begin() + static_cast<std::ptrdiff_t>(top));
  candidates.resize(top);
  return pick_uniform(candidates, rng);
}

std::optional<HostId> worst_fit_rand(std::span<const Host> hosts, const ResourceVector& demand, int lambda,
                                     Rng& rng) {
  std::vector<std::pair<double, HostId>> ranked;
  for (const Host& h : hosts) {
    if (is_available(h, demand)) ranked.emplace_back(host_load(h), h.id);
  }
  if (ranked.empty()) return std::nullopt;
  const auto top = std::min(ranked.size(), static_cast<std::size_t>(lambda));
  std::ranges::partial_sort(ranked, ranked.begin() + static_cast<std::ptrdiff_t>(top));
  ranked.resize(top);
  return pick_uniform(ranked, rng).second;
}

std::optional<HostId> apsr_agent(std::span<const Host> sample, const ResourceVector& demand, Rng& rng) {
  std::vector<HostId> found;
  for (const Host& h : sample) {
    if (is_available(h, demand)) found.push_back(h.id);
  }
  if (found.empty()) return std::nullopt;
  std::ranges::sort(found);
  const auto [first, last] = std::ranges::unique(found);
  found.erase(first, last);
  return pick_uniform(found, rng);
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown policy '" + std::string(name) +
                    "' (expected ff, wf, random, ffr, wfr, adaptive, distfromdiag, apsr)");
}

void PolicyConfig::validate() const {
  if (lambda_rank < 1) throw ConfigError("lambda_rank must be >= 1");
  if (!(adaptive_threshold >= 0.0 && adaptive_threshold <= 1.0)) {
    throw ConfigError("adaptive_threshold must lie in [0, 1]");
  }
}

double host_load(const Host& h) {
  double load = 0.0;
  for (std::size_t j = 0; j < h.capacity.dims(); ++j) {
    const std::int64_t cap = h.capacity.units(j);
    if (cap <= 0) throw ConfigError("host " + std::to_string(h.id) + " has a zero-capacity resource");
    load = std::max(load, static_cast<double>(cap - h.available.units(j)) / static_cast<double>(cap));
  }
  return load;
}

double diagonal_distance_after(const Host& h, const ResourceVector& demand) {
  const std::size_t dims = h.capacity.dims();
  std::array<double, ResourceVector::kMaxDims> usage{};
  double mean = 0.0;
  for (std::size_t j = 0; j < dims; ++j) {
    const std::int64_t cap = h.capacity.units(j);
    if (cap <= 0) throw ConfigError("host " + std::to_string(h.id) + " has a zero-capacity resource");
    usage[j] = static_cast<double>(cap - h.available.units(j) + demand.units(j)) / static_cast<double>(cap);
    mean += usage[j];
  }
  mean /= static_cast<double>(dims);
  double sq = 0.0;
  for (std::size_t j = 0; j < dims; ++j) sq += (usage[j] - mean) * (usage[j] - mean);
  return std::sqrt(sq);
}

double mean_load(std::span<const Host> hosts) {
  if (hosts.empty()) return 0.0;
  double total = 0.0;
  for (const Host& h : hosts) total += host_load(h);
  return total / static_cast<double>(hosts.size());
}

std::optional<HostId> choose(const PolicyConfig& policy, const HostView& view, const ResourceVector& demand,
                             Rng& rng) {
  if (view.kind == ViewKind::kSample && policy.needs_full_snapshot()) {
    throw ConfigError("policy '" + std::string(to_string(policy.kind)) + "' needs a full snapshot");
  }
  const auto hosts = view.entries;
  switch (policy.kind) {
    case PolicyKind::kFirstFit:
      return first_fit(hosts, demand);
    case PolicyKind::kWorstFit:
      return worst_fit(hosts, demand);
    case PolicyKind::kRandom:
      return random_available(hosts, demand, rng);
    case PolicyKind::kFirstFitRand:
      return first_fit_rand(hosts, demand, policy.lambda_rank, rng);
    case PolicyKind::kWorstFitRand:
      return worst_fit_rand(hosts, demand, policy.lambda_rank, rng);
    case PolicyKind::kAdaptive:
      return mean_load(hosts) < policy.adaptive_threshold ? worst_fit(hosts, demand) : first_fit(hosts, demand);
    case PolicyKind::kDistFromDiag:
      return dist_from_diag(hosts, demand);
    case PolicyKind::kApsrAgent:
      return apsr_agent(hosts, demand, rng);
  }
  return std::nullopt;
}

}  // namespace apsr
