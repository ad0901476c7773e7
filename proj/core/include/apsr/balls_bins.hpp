#pragma once

#include <cstdint>
#include <vector>

namespace apsr::bb {

/// n bins of which k are available, s agents each sampling d bins
/// i.i.d. uniformly with replacement.
struct Params {
  std::int64_t n = 1;
  std::int64_t k = 0;
  std::int64_t s = 1;
  std::int64_t d = 0;
};

/// SLA target: expected decline ratio at most delta_hat, at most `budget`
/// host queries per slot across all agents.
struct SlaBudget {
  double delta_hat = 0.05;
  std::int64_t budget = 1;

  void validate() const;
};

/// Probability that one agent sees at least one available bin among its d
/// samples: 1 - ((n-k)/n)^d.
[[nodiscard]] double sigma(std::int64_t n, std::int64_t k, std::int64_t d);

/// Binomial(s, p) mass at f, evaluated in log space.
[[nodiscard]] double binom_pmf(std::int64_t f, std::int64_t s, double p);

/// Expected number of distinct bins hit when f agents each pick one of k
/// bins uniformly: k * (1 - ((k-1)/k)^f).
[[nodiscard]] double expected_happy_given_f(std::int64_t k, std::int64_t f);

/// E[H], the expected number of happy agents, conditioned on the number of
/// potentially happy agents F ~ Bin(s, sigma).
[[nodiscard]] double expected_happy(const Params& p);

/// True iff E[H] >= s * (1 - delta_hat), i.e. the configuration (s, d) keeps
/// the expected decline ratio within delta_hat when k bins are available.
[[nodiscard]] bool satisfy_sla(std::int64_t n, double delta_hat, std::int64_t k, std::int64_t s,
                               std::int64_t d);

struct Config {
  std::int64_t s = 1;
  std::int64_t d = 1;
  friend bool operator==(const Config&, const Config&) = default;
};

/// Greedy search for the largest number of parallel agents: grows s from 1
/// while (s+1, floor(B/(s+1))) still satisfies the SLA and s+1 <= B.
/// Returns (s, floor(B/s)).
[[nodiscard]] Config max_paral(std::int64_t n, double delta_hat, std::int64_t budget, std::int64_t k);

struct SimulationResult {
  std::int64_t trials = 0;
  double mean_potentially_happy = 0.0;
  double mean_happy = 0.0;
  /// Standard errors of the two means across trials.
  double se_potentially_happy = 0.0;
  double se_happy = 0.0;
  /// selections[j]: number of times a potentially happy agent picked
  /// available bin j, summed over all trials.
  std::vector<std::uint64_t> selections;
  std::uint64_t potentially_happy_total = 0;
};

/// Monte-Carlo play of the game. Bins 0..k-1 are the available ones.
[[nodiscard]] SimulationResult simulate(const Params& p, std::int64_t trials, std::uint64_t seed);

}  // namespace apsr::bb
