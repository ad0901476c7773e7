#include "apsr/balls_bins.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "apsr/error.hpp"

namespace apsr::bb {
namespace {

// Absolute slack when comparing E[H] against s(1 - delta_hat); the two sides
// coincide exactly at the k = n, s = 1 boundary and differ by rounding only.
constexpr double kSlaSlack = 1e-12;

void check_params(const Params& p) {
  if (p.n < 1) throw ArgumentError("n must be >= 1");
  if (p.k < 0 || p.k > p.n) throw ArgumentError("k must lie in [0, n]");
  if (p.s < 1) throw ArgumentError("s must be >= 1");
  if (p.d < 0) throw ArgumentError("d must be >= 0");
}

}  // namespace

void SlaBudget::validate() const {
  if (!(delta_hat >= 0.0 && delta_hat <= 1.0)) throw ArgumentError("delta_hat must lie in [0, 1]");
  if (budget < 1) throw ArgumentError("budget must be >= 1");
}

double sigma(std::int64_t n, std::int64_t k, std::int64_t d) {
  if (n < 1) throw ArgumentError("sigma: n must be >= 1");
  if (k < 0 || k > n) throw ArgumentError("sigma: k must lie in [0, n]");
  if (d < 0) throw ArgumentError("sigma: d must be >= 0");
  if (k == 0 || d == 0) return 0.0;
  const double miss = static_cast<double>(n - k) / static_cast<double>(n);
  return 1.0 - std::pow(miss, static_cast<double>(d));
}

double binom_pmf(std::int64_t f, std::int64_t s, double p) {
  if (s < 0 || f < 0 || f > s) throw ArgumentError("binom_pmf: need 0 <= f <= s");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("binom_pmf: p must lie in [0, 1]");
  if (p == 0.0) return f == 0 ? 1.0 : 0.0;
  if (p == 1.0) return f == s ? 1.0 : 0.0;
  const double fs = static_cast<double>(s);
  const double ff = static_cast<double>(f);
  const double log_coeff = std::lgamma(fs + 1.0) - std::lgamma(ff + 1.0) - std::lgamma(fs - ff + 1.0);
  return std::exp(log_coeff + ff * std::log(p) + (fs - ff) * std::log1p(-p));
}

double expected_happy_given_f(std::int64_t k, std::int64_t f) {
  if (k < 0 || f < 0) throw ArgumentError("expected_happy_given_f: k and f must be >= 0");
  if (k == 0 || f == 0) return 0.0;
  const double fk = static_cast<double>(k);
  // k * (1 - ((k-1)/k)^f), with the power taken through log1p for large k.
  return fk * -std::expm1(static_cast<double>(f) * std::log1p(-1.0 / fk));
}

double expected_happy(const Params& p) {
  check_params(p);
  if (p.k == 0 || p.d == 0) return 0.0;
  const double sig = sigma(p.n, p.k, p.d);
  double total = 0.0;
  for (std::int64_t f = 1; f <= p.s; ++f) {
    total += binom_pmf(f, p.s, sig) * expected_happy_given_f(p.k, f);
  }
  return total;
}

bool satisfy_sla(std::int64_t n, double delta_hat, std::int64_t k, std::int64_t s, std::int64_t d) {
  if (!(delta_hat >= 0.0 && delta_hat <= 1.0)) throw ArgumentError("delta_hat must lie in [0, 1]");
  const double need = static_cast<double>(s) * (1.0 - delta_hat);
  return expected_happy({n, k, s, d}) >= need - kSlaSlack;
}

Config max_paral(std::int64_t n, double delta_hat, std::int64_t budget, std::int64_t k) {
  if (n < 1) throw ArgumentError("max_paral: n must be >= 1");
  if (k < 0 || k > n) throw ArgumentError("max_paral: k must lie in [0, n]");
  SlaBudget{delta_hat, budget}.validate();

  std::int64_t s = 1;
  while (s + 1 <= budget && satisfy_sla(n, delta_hat, k, s + 1, budget / (s + 1))) ++s;
  return {s, budget / s};
}

SimulationResult simulate(const Params& p, std::int64_t trials, std::uint64_t seed) {
  check_params(p);
  if (trials < 1) throw ArgumentError("simulate: trials must be >= 1");

  SimulationResult out;
  out.trials = trials;
  out.selections.assign(static_cast<std::size_t>(p.k), 0);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> draw_bin(0, p.n - 1);

  // Stamps avoid clearing per-agent and per-trial scratch arrays.
  std::vector<std::uint64_t> sampled_stamp(static_cast<std::size_t>(p.k), 0);
  std::vector<std::uint64_t> taken_stamp(static_cast<std::size_t>(p.k), 0);
  std::vector<std::int64_t> found;
  found.reserve(static_cast<std::size_t>(p.d));
  std::uint64_t agent_tag = 0;

  double sum_f = 0.0, sumsq_f = 0.0, sum_h = 0.0, sumsq_h = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto trial_tag = static_cast<std::uint64_t>(t) + 1;
    std::int64_t potentially_happy = 0;
    std::int64_t happy = 0;
    for (std::int64_t a = 0; a < p.s; ++a) {
      ++agent_tag;
      found.clear();
      for (std::int64_t q = 0; q < p.d; ++q) {
        const std::int64_t bin = draw_bin(rng);
        if (bin < p.k && sampled_stamp[bin] != agent_tag) {
          sampled_stamp[bin] = agent_tag;
          found.push_back(bin);
        }
      }
      if (found.empty()) continue;
      ++potentially_happy;
      std::uniform_int_distribution<std::size_t> pick(0, found.size() - 1);
      const std::int64_t bin = found[pick(rng)];
      ++out.selections[bin];
      if (taken_stamp[bin] != trial_tag) {
        taken_stamp[bin] = trial_tag;
        ++happy;
      }
    }
    out.potentially_happy_total += static_cast<std::uint64_t>(potentially_happy);
    const auto f = static_cast<double>(potentially_happy);
    const auto h = static_cast<double>(happy);
    sum_f += f;
    sumsq_f += f * f;
    sum_h += h;
    sumsq_h += h * h;
  }

  const auto nt = static_cast<double>(trials);
  out.mean_potentially_happy = sum_f / nt;
  out.mean_happy = sum_h / nt;
  if (trials > 1) {
    const double var_f = std::max(0.0, (sumsq_f - nt * out.mean_potentially_happy * out.mean_potentially_happy) / (nt - 1));
    const double var_h = std::max(0.0, (sumsq_h - nt * out.mean_happy * out.mean_happy) / (nt - 1));
    out.se_potentially_happy = std::sqrt(var_f / nt);
    out.se_happy = std::sqrt(var_h / nt);
  }
  return out;
}

}  // namespace apsr::bb
