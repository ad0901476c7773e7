#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apsr/model.hpp"
#include "apsr/policy.hpp"

namespace apsr {

/// One row of a dataset table. For unclassed flavors `count` is the
/// multiplicity per replica; inside a class it is the relative draw weight.
struct DatasetFlavor {
  ResourceVector demand;
  std::uint64_t count = 0;
  std::string request_class;  // empty when unclassed
};

struct HostShape {
  ResourceVector capacity;
  std::uint32_t proportion = 1;
};

/// A class of flavors from which `per_replica` requests are drawn uniformly
/// (weighted by the flavor counts) for each replica.
struct RequestClass {
  std::string name;
  std::uint64_t per_replica = 0;
};

struct DatasetSpec {
  std::string name;
  std::vector<std::string> resources;
  std::vector<HostShape> host_shapes;
  std::vector<RequestClass> classes;
  std::vector<DatasetFlavor> flavors;

  void validate() const;
  [[nodiscard]] std::size_t dims() const { return resources.size(); }
  /// Flavor set C with dense ids matching the row order.
  [[nodiscard]] std::vector<Flavor> flavor_set() const;
  [[nodiscard]] std::uint64_t requests_per_replica() const;
};

/// Parses the plain-text table format:
///
///   # comment
///   name <dataset-name>
///   resources <r1> <r2> ...
///   host <cap1> <cap2> ... <proportion>      (one or more)
///   class <name> <requests-per-replica>      (optional, repeatable)
///   <v1> <v2> ... <count> [class]            (one line per flavor)
[[nodiscard]] DatasetSpec parse_dataset(std::string_view text);
[[nodiscard]] DatasetSpec load_dataset_file(const std::filesystem::path& path);
[[nodiscard]] std::string format_dataset(const DatasetSpec& spec);

[[nodiscard]] std::vector<std::string> builtin_dataset_names();
/// Embedded tables: "nfv", "google", "amazon". Throws ConfigError otherwise.
[[nodiscard]] DatasetSpec builtin_dataset(std::string_view name);
[[nodiscard]] std::string_view builtin_dataset_text(std::string_view name);

/// Reference host counts. "eval" is the fleet used for the APSR comparison
/// runs (NFV 837, Amazon 876, Google 5989); "study" is the fleet used for
/// the parallel-placement study (NFV 279, Amazon 126, Google 5989).
[[nodiscard]] std::int64_t preset_host_count(std::string_view dataset, std::string_view preset);

/// n empty hosts, shapes assigned round-robin by proportion in id order.
[[nodiscard]] std::vector<Host> build_hosts(const DatasetSpec& spec, std::int64_t n);

/// Requests for `replicas` copies of the dataset in a seeded uniform random
/// order. Ids are 0..N-1 in trace order; arrival slots are left at 0.
[[nodiscard]] std::vector<Request> build_trace(const DatasetSpec& spec, std::int64_t replicas, std::uint64_t seed);

struct ArrivalProcess {
  enum class Kind { kPoisson, kMmpp };
  Kind kind = Kind::kPoisson;
  double rate = 20.0;            // lambda_a, or the opening rate for MMPP
  double low_rate = 5.0;         // MMPP rate after the switch
  double switch_fraction = 0.2;  // MMPP switches after this share of requests

  void validate() const;
};

/// Per-slot arrival counts summing to exactly trace_length; the last slot is
/// truncated.
[[nodiscard]] std::vector<std::uint32_t> build_arrivals(const ArrivalProcess& process, std::uint64_t trace_length,
                                                        std::uint64_t seed);

struct SizingRun {
  std::int64_t run = 0;
  PolicyKind policy = PolicyKind::kFirstFit;
  std::int64_t hosts = 0;
};

struct SizingReport {
  std::int64_t min_hosts = 0;
  std::vector<SizingRun> runs;
};

/// Estimates the fleet size that fits the whole trace: for each run and
/// policy, shuffles the trace and places it with a single scheduler, opening
/// a new host whenever nothing open fits. Returns the minimum over all.
[[nodiscard]] SizingReport size_hosts(const DatasetSpec& spec, std::int64_t replicas,
                                      const std::vector<PolicyConfig>& policies, std::int64_t runs,
                                      std::uint64_t seed);

/// One sizing pass: the number of hosts opened for this order and policy.
/// `initial_hosts` empty hosts are open from the start.
[[nodiscard]] std::int64_t size_one_pass(const DatasetSpec& spec, const std::vector<Request>& trace,
                                         const PolicyConfig& policy, std::uint64_t seed,
                                         std::int64_t initial_hosts = 0);

}  // namespace apsr
