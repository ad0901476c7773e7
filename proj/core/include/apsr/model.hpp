#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "apsr/resource.hpp"

namespace apsr {

using HostId = std::uint32_t;
using FlavorId = std::uint32_t;
using RequestId = std::uint64_t;
using Slot = std::uint64_t;

inline constexpr Slot kNeverDeparts = std::numeric_limits<Slot>::max();

struct Flavor {
  FlavorId id = 0;
  ResourceVector demand;
};

struct Host {
  HostId id = 0;
  ResourceVector capacity;
  ResourceVector available;

  static Host empty(HostId id, const ResourceVector& capacity) { return {id, capacity, capacity}; }
};

/// Request lifetime in slots; default-constructed is infinite.
class Lifetime {
 public:
  Lifetime() = default;
  static Lifetime infinite() { return {}; }
  static Lifetime slots(std::uint64_t n);

  [[nodiscard]] bool is_infinite() const { return !slots_.has_value(); }
  [[nodiscard]] std::uint64_t count() const { return slots_.value(); }
  [[nodiscard]] Slot departure_after(Slot arrival) const;

  friend bool operator==(const Lifetime&, const Lifetime&) = default;

 private:
  std::optional<std::uint64_t> slots_;
};

struct Request {
  RequestId id = 0;
  FlavorId flavor = 0;
  Slot arrival_slot = 0;
  Lifetime lifetime;
};

/// True iff the flavor's demand fits in the host's current availability.
[[nodiscard]] bool is_available(const Host& host, const Flavor& flavor);
[[nodiscard]] inline bool is_available(const Host& host, const ResourceVector& demand) {
  return demand.fits_within(host.available);
}

enum class PlaceOutcome { kPlaced, kDeclined };

/// Per-flavor count of hosts whose availability dominates the flavor demand.
struct AvailabilityCensus {
  std::vector<std::uint32_t> per_flavor;  // indexed by FlavorId

  /// The pessimistic scalar k: the minimum over all flavors (0 when empty).
  [[nodiscard]] std::uint32_t min() const;
};

/// Hosts, pending queue, and live placements for one simulation run.
///
/// Host ids are dense 0..n-1 and flavor ids dense 0..m-1. Every placed
/// request's demand is subtracted from exactly one host; the sum of
/// (capacity - available) over hosts always equals the sum of placed demands.
class ClusterState {
 public:
  ClusterState(std::vector<Host> hosts, std::vector<Flavor> flavors);

  [[nodiscard]] std::span<const Host> hosts() const { return hosts_; }
  [[nodiscard]] const Host& host(HostId id) const;
  [[nodiscard]] std::span<const Flavor> flavors() const { return flavors_; }
  [[nodiscard]] const Flavor& flavor(FlavorId id) const;
  [[nodiscard]] std::size_t dims() const { return dims_; }

  [[nodiscard]] Slot slot() const { return slot_; }
  void set_slot(Slot t) { slot_ = t; }

  [[nodiscard]] std::deque<Request>& pending() { return pending_; }
  [[nodiscard]] const std::deque<Request>& pending() const { return pending_; }

  /// Resolves `request` at `host_id` against live availability. A decline
  /// leaves the state untouched. Throws ModelError for an unknown host or a
  /// request id that is already placed.
  PlaceOutcome place(const Request& request, HostId host_id);

  /// Returns the request's demand to its host. Throws ModelError if the
  /// request is not currently placed.
  void complete(RequestId id);

  /// Completes every placement whose departure slot is <= t. Returns how many.
  std::size_t complete_due(Slot t);

  [[nodiscard]] bool is_placed(RequestId id) const { return placements_.contains(id); }
  [[nodiscard]] std::size_t placed_count() const { return placed_order_.size(); }
  /// The i-th live placement in an order that is deterministic for a given
  /// history (used for uniform random departures).
  [[nodiscard]] RequestId placed_at(std::size_t i) const { return placed_order_[i]; }
  [[nodiscard]] std::optional<HostId> host_of(RequestId id) const;

  /// Coordinate-wise sum of (capacity - available) over all hosts.
  [[nodiscard]] ResourceVector used_total() const;
  [[nodiscard]] ResourceVector capacity_total() const;
  /// Coordinate-wise sum of the demands of placed requests.
  [[nodiscard]] ResourceVector placed_demand_total() const;

 private:
  struct Placement {
    HostId host;
    FlavorId flavor;
    Slot departure;
    std::size_t order_index;
  };

  std::vector<Host> hosts_;
  std::vector<Flavor> flavors_;
  std::size_t dims_ = 0;
  Slot slot_ = 0;
  std::deque<Request> pending_;
  std::unordered_map<RequestId, Placement> placements_;
  std::vector<RequestId> placed_order_;
  using Due = std::pair<Slot, RequestId>;
  std::priority_queue<Due, std::vector<Due>, std::greater<>> departures_;
};

/// Exact per-flavor availability counts for the current state.
[[nodiscard]] AvailabilityCensus census(std::span<const Host> hosts, std::span<const Flavor> flavors);
[[nodiscard]] inline AvailabilityCensus census(const ClusterState& state) {
  return census(state.hosts(), state.flavors());
}

}  // namespace apsr
