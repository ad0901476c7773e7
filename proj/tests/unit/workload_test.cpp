#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "apsr/error.hpp"
#include "apsr/workload.hpp"

namespace apsr {
namespace {

std::map<FlavorId, std::uint64_t> histogram(const std::vector<Request>& trace) {
  std::map<FlavorId, std::uint64_t> h;
  for (const Request& r : trace) ++h[r.flavor];
  return h;
}

FlavorId flavor_with(const DatasetSpec& spec, std::initializer_list<double> demand) {
  const auto target = ResourceVector::from_reals(demand);
  for (std::size_t i = 0; i < spec.flavors.size(); ++i) {
    if (spec.flavors[i].demand == target) return static_cast<FlavorId>(i);
  }
  ADD_FAILURE() << "no flavor " << target.to_string();
  return 0;
}

TEST(DatasetTest, ReferencePerReplicaTotals) {
  EXPECT_EQ(builtin_dataset("nfv").requests_per_replica(), 437u);
  EXPECT_EQ(builtin_dataset("google").requests_per_replica(), 12477u);
  EXPECT_EQ(builtin_dataset("amazon").requests_per_replica(), 1100u);
}

TEST(DatasetTest, NfvMarginalsMatchReferenceTable) {
  // Storage column totals 105, 283, 15, 19, 15; memory row totals 66, 102, 262, 3, 4.
  const auto spec = builtin_dataset("nfv");
  std::map<double, std::uint64_t> by_storage, by_memory;
  for (const auto& f : spec.flavors) {
    by_memory[f.demand[0]] += f.count;
    by_storage[f.demand[1]] += f.count;
  }
  EXPECT_EQ(by_storage, (std::map<double, std::uint64_t>{{0.01, 105}, {0.04, 283}, {0.1, 15}, {0.3, 19}, {0.54, 15}}));
  EXPECT_EQ(by_memory, (std::map<double, std::uint64_t>{{0.001, 66}, {0.016, 102}, {0.032, 262}, {0.064, 3}, {0.19, 4}}));
}

TEST(DatasetTest, GoogleMarginalsMatchReferenceTable) {
  const auto spec = builtin_dataset("google");
  std::map<double, std::uint64_t> by_cpu, by_memory;
  for (const auto& f : spec.flavors) {
    by_cpu[f.demand[0]] += f.count;
    by_memory[f.demand[1]] += f.count;
  }
  EXPECT_EQ(by_cpu, (std::map<double, std::uint64_t>{{0.25, 123}, {0.5, 11563}, {1.0, 791}}));
  EXPECT_EQ(by_memory, (std::map<double, std::uint64_t>{{0.125, 60}, {0.25, 3958}, {0.5, 6675}, {0.75, 992}, {1.0, 792}}));
}

TEST(DatasetTest, AmazonClassBoundaryAtCpuPointFour) {
  const auto spec = builtin_dataset("amazon");
  ASSERT_EQ(spec.flavors.size(), 15u);
  for (const auto& f : spec.flavors) {
    EXPECT_EQ(f.request_class, f.demand[0] < 0.4 ? "small" : "large") << f.demand.to_string();
  }
}

TEST(DatasetTest, UnknownNameIsConfigError) { EXPECT_THROW((void)builtin_dataset("azure"), ConfigError); }

TEST(DatasetTest, FormatParsesBackToSameSpec) {
  for (const auto& name : builtin_dataset_names()) {
    const auto spec = builtin_dataset(name);
    const auto again = parse_dataset(format_dataset(spec));
    EXPECT_EQ(again.name, spec.name);
    EXPECT_EQ(again.resources, spec.resources);
    ASSERT_EQ(again.flavors.size(), spec.flavors.size());
    for (std::size_t i = 0; i < spec.flavors.size(); ++i) {
      EXPECT_EQ(again.flavors[i].demand, spec.flavors[i].demand);
      EXPECT_EQ(again.flavors[i].count, spec.flavors[i].count);
      EXPECT_EQ(again.flavors[i].request_class, spec.flavors[i].request_class);
    }
    EXPECT_EQ(again.requests_per_replica(), spec.requests_per_replica());
  }
}

TEST(DatasetParserTest, ReportsMalformedInput) {
  EXPECT_THROW((void)parse_dataset("name x\nresources a b\nhost 1 1 1\n0.1 zz 3\n"), ConfigError);
  EXPECT_THROW((void)parse_dataset("name x\nresources a b\nhost 1 1 1\n0.1 0.1\n"), ConfigError);
  EXPECT_THROW((void)parse_dataset("name x\nresources a b\n0.1 0.1 3\n"), ConfigError);
  EXPECT_THROW((void)parse_dataset("name x\nresources a b\nhost 1 1 1\n1.5 0.1 3\n"), ConfigError);
  EXPECT_THROW((void)parse_dataset("name x\nresources a b\nhost 1 1 1\n0.1 0.1 3 tiny\n"), ConfigError);
  EXPECT_THROW((void)parse_dataset("name x\nresources a b\nhost 1 1 1\n0 0 3\n"), ConfigError);
}

TEST(DatasetParserTest, AcceptsCommentsAndBlankLines) {
  const auto spec = parse_dataset("# hi\n\nname tiny\nresources cpu\nhost 1 1\n0.5 2  # two halves\n");
  EXPECT_EQ(spec.name, "tiny");
  EXPECT_EQ(spec.requests_per_replica(), 2u);
}

TEST(BuildTraceTest, ReferenceTraceLengths) {
  EXPECT_EQ(build_trace(builtin_dataset("nfv"), 30, 1).size(), 13110u);
  EXPECT_EQ(build_trace(builtin_dataset("amazon"), 7, 1).size(), 7700u);
  EXPECT_EQ(build_trace(builtin_dataset("google"), 1, 1).size(), 12477u);
}

TEST(BuildTraceTest, NfvSingleReplicaHasFourteenSmallestRequests) {
  const auto spec = builtin_dataset("nfv");
  EXPECT_EQ(histogram(build_trace(spec, 1, 3))[flavor_with(spec, {0.001, 0.01})], 14u);
}

TEST(BuildTraceTest, IdsAreDenseInTraceOrder) {
  const auto trace = build_trace(builtin_dataset("nfv"), 2, 8);
  for (std::size_t i = 0; i < trace.size(); ++i) EXPECT_EQ(trace[i].id, i);
}

TEST(BuildTraceTest, ZeroReplicasIsConfigError) {
  EXPECT_THROW((void)build_trace(builtin_dataset("nfv"), 0, 1), ConfigError);
}

TEST(BuildTraceProperty, HistogramIsExactTableTimesReplicas) {
  for (const char* name : {"nfv", "google"}) {
    const auto spec = builtin_dataset(name);
    for (std::int64_t replicas : {1, 3}) {
      const auto h = histogram(build_trace(spec, replicas, 77));
      for (std::size_t f = 0; f < spec.flavors.size(); ++f) {
        EXPECT_EQ(h.at(static_cast<FlavorId>(f)), spec.flavors[f].count * static_cast<std::uint64_t>(replicas));
      }
    }
  }
}

TEST(BuildTraceProperty, DifferentSeedsPermuteTheSameMultiset) {
  const auto spec = builtin_dataset("nfv");
  const auto a = build_trace(spec, 5, 1);
  const auto b = build_trace(spec, 5, 2);
  std::vector<FlavorId> fa, fb;
  for (const auto& r : a) fa.push_back(r.flavor);
  for (const auto& r : b) fb.push_back(r.flavor);
  EXPECT_NE(fa, fb);
  EXPECT_TRUE(std::ranges::is_permutation(fa, fb));
}

TEST(BuildTraceProperty, AmazonClassSplitIsExactPerReplica) {
  const auto spec = builtin_dataset("amazon");
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto trace = build_trace(spec, 7, seed);
    std::uint64_t small = 0;
    for (const auto& r : trace) small += spec.flavors[r.flavor].request_class == "small";
    EXPECT_EQ(small, 7000u);
    EXPECT_EQ(trace.size() - small, 700u);
  }
}

TEST(BuildTraceProperty, AmazonDrawsUniformWithinClass) {
  const auto spec = builtin_dataset("amazon");
  const auto h = histogram(build_trace(spec, 200, 4));
  // 200 replicas: 200k small over 9 flavors, 20k large over 6.
  double chi2_small = 0.0, chi2_large = 0.0;
  for (std::size_t f = 0; f < spec.flavors.size(); ++f) {
    const bool small = spec.flavors[f].request_class == "small";
    const double expected = small ? 200'000.0 / 9 : 20'000.0 / 6;
    const double c = static_cast<double>(h.at(static_cast<FlavorId>(f)));
    (small ? chi2_small : chi2_large) += (c - expected) * (c - expected) / expected;
  }
  // chi-square 0.999 quantiles: 8 dof 26.12, 5 dof 20.52.
  EXPECT_LT(chi2_small, 26.12);
  EXPECT_LT(chi2_large, 20.52);
}

TEST(BuildHostsTest, NfvHostsAreUnitSquares) {
  for (const Host& h : build_hosts(builtin_dataset("nfv"), 5)) {
    EXPECT_EQ(h.capacity, ResourceVector::from_reals({1, 1}));
    EXPECT_EQ(h.available, h.capacity);
  }
}

TEST(BuildHostsTest, EvenFleetsSplitShapesInHalf) {
  for (const char* name : {"google", "amazon"}) {
    for (std::int64_t n : {2, 126, 876, 5988}) {
      const auto hosts = build_hosts(builtin_dataset(name), n);
      const auto tall = std::ranges::count_if(hosts, [](const Host& h) { return h.capacity[1] == 2.0; });
      EXPECT_EQ(tall, n / 2) << name << " n=" << n;
    }
  }
}

TEST(PresetTest, ReferenceHostCounts) {
  EXPECT_EQ(preset_host_count("nfv", "eval"), 837);
  EXPECT_EQ(preset_host_count("amazon", "eval"), 876);
  EXPECT_EQ(preset_host_count("google", "eval"), 5989);
  EXPECT_EQ(preset_host_count("nfv", "study"), 279);
  EXPECT_EQ(preset_host_count("amazon", "study"), 126);
  EXPECT_THROW((void)preset_host_count("nfv", "huge"), ConfigError);
}

TEST(ArrivalsTest, CountsSumToTraceLength) {
  for (std::uint64_t len : {1, 7, 13110}) {
    const auto a = build_arrivals({}, len, 5);
    EXPECT_EQ(std::accumulate(a.begin(), a.end(), std::uint64_t{0}), len);
  }
}

TEST(ArrivalsTest, MeanSlotCountMatchesRate) {
  // 13110 requests at 20 per slot last about 655.5 slots; the slot count's
  // spread over seeds is a few slots.
  double total_slots = 0.0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) total_slots += static_cast<double>(build_arrivals({}, 13110, s).size());
  EXPECT_NEAR(total_slots / seeds, 13110.0 / 20.0, 2.0);
}

TEST(ArrivalsTest, PoissonPerSlotMeanAndVariance) {
  const auto a = build_arrivals({}, 2'000'000, 9);
  double sum = 0, sumsq = 0;
  const std::size_t full = a.size() - 1;  // the last slot is truncated
  for (std::size_t i = 0; i < full; ++i) {
    sum += a[i];
    sumsq += static_cast<double>(a[i]) * a[i];
  }
  const double mean = sum / static_cast<double>(full);
  const double var = sumsq / static_cast<double>(full) - mean * mean;
  EXPECT_NEAR(mean, 20.0, 4 * std::sqrt(20.0 / static_cast<double>(full)));
  EXPECT_NEAR(var, 20.0, 0.5);
}

TEST(ArrivalsTest, MmppSwitchesRateAfterFirstFifth) {
  ArrivalProcess mmpp{ArrivalProcess::Kind::kMmpp, 20.0, 5.0, 0.2};
  double early_rate = 0, late_rate = 0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const auto a = build_arrivals(mmpp, 100'000, s);
    std::uint64_t arrived = 0;
    std::uint64_t early_slots = 0, early = 0, late_slots = 0, late = 0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      if (arrived < 20'000) {
        ++early_slots;
        early += a[i];
      } else {
        ++late_slots;
        late += a[i];
      }
      arrived += a[i];
    }
    early_rate += static_cast<double>(early) / static_cast<double>(early_slots);
    late_rate += static_cast<double>(late) / static_cast<double>(late_slots);
  }
  EXPECT_NEAR(early_rate / seeds, 20.0, 0.1);
  EXPECT_NEAR(late_rate / seeds, 5.0, 0.05);
}

TEST(ArrivalsTest, MmppThousandRequestsSwitchNearTwoHundred) {
  ArrivalProcess mmpp{ArrivalProcess::Kind::kMmpp, 20.0, 5.0, 0.2};
  const auto a = build_arrivals(mmpp, 1000, 3);
  std::uint64_t arrived = 0;
  std::size_t i = 0;
  while (arrived < 200) arrived += a[i++];
  // The slot that crosses 200 is still drawn at the high rate.
  EXPECT_LT(arrived, 200u + 60u);
  for (; i + 1 < a.size(); ++i) EXPECT_LT(a[i], 20u);
}

TEST(ArrivalsTest, NonPositiveRateIsConfigError) {
  EXPECT_THROW((void)build_arrivals({ArrivalProcess::Kind::kPoisson, 0.0}, 10, 1), ConfigError);
  EXPECT_THROW((void)build_arrivals({ArrivalProcess::Kind::kMmpp, 20.0, 0.0}, 10, 1), ConfigError);
  EXPECT_THROW((void)build_arrivals({}, 0, 1), ConfigError);
}

TEST(ArrivalsTest, SameSeedSameSchedule) { EXPECT_EQ(build_arrivals({}, 5000, 4), build_arrivals({}, 5000, 4)); }

DatasetSpec one_flavor(double v, std::uint64_t count) {
  return parse_dataset("name t\nresources a b\nhost 1 1 1\n" + std::to_string(v) + " " + std::to_string(v) + " " +
                       std::to_string(count) + "\n");
}

TEST(SizingTest, SingleRequestNeedsOneHost) {
  const auto spec = one_flavor(0.3, 1);
  EXPECT_EQ(size_hosts(spec, 1, {{PolicyKind::kFirstFit}}, 1, 1).min_hosts, 1);
}

TEST(SizingTest, TwoLargeRequestsNeedTwoHosts) {
  const auto spec = one_flavor(0.6, 2);
  EXPECT_EQ(size_hosts(spec, 1, {{PolicyKind::kFirstFit}, {PolicyKind::kRandom}}, 3, 1).min_hosts, 2);
}

TEST(SizingTest, ReportHasOneRowPerRunAndPolicy) {
  const auto r = size_hosts(builtin_dataset("nfv"), 1, {{PolicyKind::kFirstFit}, {PolicyKind::kWorstFit}}, 3, 2);
  ASSERT_EQ(r.runs.size(), 6u);
  std::int64_t best = r.runs.front().hosts;
  for (const auto& row : r.runs) best = std::min(best, row.hosts);
  EXPECT_EQ(r.min_hosts, best);
}

TEST(SizingTest, ZeroRunsIsConfigError) {
  EXPECT_THROW((void)size_hosts(builtin_dataset("nfv"), 1, {{PolicyKind::kFirstFit}}, 0, 1), ConfigError);
}

TEST(SizingTest, SameSeedSameCount) {
  const auto a = size_hosts(builtin_dataset("nfv"), 1, {{PolicyKind::kFirstFit}}, 1, 6);
  const auto b = size_hosts(builtin_dataset("nfv"), 1, {{PolicyKind::kFirstFit}}, 1, 6);
  EXPECT_EQ(a.min_hosts, b.min_hosts);
}

TEST(SizingProperty, FirstFitReplayOpensNothingBeyondCount) {
  for (const char* name : {"nfv", "amazon"}) {
    const auto spec = builtin_dataset(name);
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto trace = build_trace(spec, 2, seed);
      const auto count = size_one_pass(spec, trace, {PolicyKind::kFirstFit}, seed);
      EXPECT_EQ(size_one_pass(spec, trace, {PolicyKind::kFirstFit}, seed, count), count) << name;
    }
  }
}

TEST(SizingProperty, CountBoundedByVolume) {
  // No packing can use fewer hosts than the largest per-resource volume.
  const auto spec = builtin_dataset("nfv");
  const auto trace = build_trace(spec, 3, 5);
  double mem = 0, sto = 0;
  for (const auto& r : trace) {
    mem += spec.flavors[r.flavor].demand[0];
    sto += spec.flavors[r.flavor].demand[1];
  }
  const auto count = size_one_pass(spec, trace, {PolicyKind::kFirstFit}, 5);
  EXPECT_GE(static_cast<double>(count), std::ceil(std::max(mem, sto) - 1e-9));
  EXPECT_LE(count, static_cast<std::int64_t>(trace.size()));
}

}  // namespace
}  // namespace apsr
