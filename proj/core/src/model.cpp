#include "apsr/model.hpp"

#include <algorithm>
#include <string>

#include "apsr/error.hpp"

namespace apsr {

Lifetime Lifetime::slots(std::uint64_t n) {
  if (n == 0) throw ModelError("finite lifetime must be at least one slot");
  Lifetime l;
  l.slots_ = n;
  return l;
}

Slot Lifetime::departure_after(Slot arrival) const {
  if (is_infinite()) return kNeverDeparts;
  return arrival + *slots_;
}

bool is_available(const Host& host, const Flavor& flavor) {
  return flavor.demand.fits_within(host.available);
}

std::uint32_t AvailabilityCensus::min() const {
  if (per_flavor.empty()) return 0;
  return *std::ranges::min_element(per_flavor);
}

ClusterState::ClusterState(std::vector<Host> hosts, std::vector<Flavor> flavors)
    : hosts_(std::move(hosts)), flavors_(std::move(flavors)) {
  if (hosts_.empty()) throw ModelError("cluster needs at least one host");
  dims_ = hosts_.front().capacity.dims();
  for (std::size_t i = 0; i < hosts_.size(); ++i) {
    const Host& h = hosts_[i];
    if (h.id != i) throw ModelError("host ids must be dense 0..n-1");
    if (h.capacity.dims() != dims_ || h.available.dims() != dims_) {
      throw ModelError("host " + std::to_string(i) + " has the wrong resource dimension");
    }
    if (!h.available.fits_within(h.capacity)) {
      throw ModelError("host " + std::to_string(i) + " availability exceeds capacity");
    }
  }
  for (std::size_t i = 0; i < flavors_.size(); ++i) {
    const Flavor& f = flavors_[i];
    if (f.id != i) throw ModelError("flavor ids must be dense 0..m-1");
    if (f.demand.dims() != dims_) throw ModelError("flavor " + std::to_string(i) + " has the wrong dimension");
    if (!f.demand.any_positive()) throw ModelError("flavor " + std::to_string(i) + " has an all-zero demand");
  }
}

const Host& ClusterState::host(HostId id) const {
  if (id >= hosts_.size()) throw ModelError("unknown host id " + std::to_string(id));
  return hosts_[id];
}

const Flavor& ClusterState::flavor(FlavorId id) const {
  if (id >= flavors_.size()) throw ModelError("unknown flavor id " + std::to_string(id));
  return flavors_[id];
}

PlaceOutcome ClusterState::place(const Request& request, HostId host_id) {
  if (host_id >= hosts_.size()) throw ModelError("unknown host id " + std::to_string(host_id));
  if (placements_.contains(request.id)) {
    throw ModelError("request " + std::to_string(request.id) + " is already placed");
  }
  const Flavor& f = flavor(request.flavor);
  Host& h = hosts_[host_id];
  if (!is_available(h, f)) return PlaceOutcome::kDeclined;

  h.available -= f.demand;
  const Slot departure = request.lifetime.departure_after(request.arrival_slot);
  placements_.emplace(request.id, Placement{host_id, f.id, departure, placed_order_.size()});
  placed_order_.push_back(request.id);
  if (departure != kNeverDeparts) departures_.emplace(departure, request.id);
  return PlaceOutcome::kPlaced;
}

void ClusterState::complete(RequestId id) {
  auto it = placements_.find(id);
  if (it == placements_.end()) throw ModelError("request " + std::to_string(id) + " is not placed");
  const Placement p = it->second;
  hosts_[p.host].available += flavors_[p.flavor].demand;

  // Swap-remove from the dense order vector.
  const RequestId moved = placed_order_.back();
  placed_order_[p.order_index] = moved;
  placements_.at(moved).order_index = p.order_index;
  placed_order_.pop_back();
  placements_.erase(it);
}

std::size_t ClusterState::complete_due(Slot t) {
  std::size_t done = 0;
  while (!departures_.empty() && departures_.top().first <= t) {
    const auto [departure, id] = departures_.top();
    departures_.pop();
    // Entries are lazily invalidated when a request left by other means.
    auto it = placements_.find(id);
    if (it == placements_.end() || it->second.departure != departure) continue;
    complete(id);
    ++done;
  }
  return done;
}

std::optional<HostId> ClusterState::host_of(RequestId id) const {
  auto it = placements_.find(id);
  if (it == placements_.end()) return std::nullopt;
  return it->second.host;
}

ResourceVector ClusterState::used_total() const {
  ResourceVector total = ResourceVector::zeros(dims_);
  for (const Host& h : hosts_) total += h.capacity - h.available;
  return total;
}

ResourceVector ClusterState::capacity_total() const {
  ResourceVector total = ResourceVector::zeros(dims_);
  for (const Host& h : hosts_) total += h.capacity;
  return total;
}

ResourceVector ClusterState::placed_demand_total() const {
  ResourceVector total = ResourceVector::zeros(dims_);
  for (const RequestId id : placed_order_) total += flavors_[placements_.at(id).flavor].demand;
  return total;
}

AvailabilityCensus census(std::span<const Host> hosts, std::span<const Flavor> flavors) {
  AvailabilityCensus c;
  c.per_flavor.assign(flavors.size(), 0);
  for (const Host& h : hosts) {
    for (std::size_t i = 0; i < flavors.size(); ++i) {
      if (is_available(h, flavors[i])) ++c.per_flavor[i];
    }
  }
  return c;
}

}  // namespace apsr
