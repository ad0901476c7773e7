#include "apsr/cli/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "apsr/balls_bins.hpp"
#include "apsr/error.hpp"

namespace apsr::cli {

std::string format_number(double value) {
  if (!std::isfinite(value)) throw ModelError("refusing to serialize a non-finite number");
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw ModelError("number formatting failed");
  return {buf.data(), ptr};
}

std::string analyze_header() { return "n,delta_hat,B,k,s,d,EH,EH_over_s"; }

std::string runs_header() {
  return "seed,slots,attempts,successes,decline_no_host,decline_collision,decline_ratio,throughput,"
         "mean_active,scheduler_queries,controller_queries,total_queries,truncated";
}

std::string series_header() {
  return "slot,arrivals,departures,attempts,successes,decline_no_host,decline_collision,queries,"
         "controller_queries,active_schedulers,s,d,k_estimate,pending,utilization,delta_so_far";
}

std::string sizing_header() { return "run,policy,hosts"; }

AnalyzeRow analyze_row(std::int64_t n, double delta_hat, std::int64_t budget, std::int64_t k) {
  const auto cfg = bb::max_paral(n, delta_hat, budget, k);
  return {n, delta_hat, budget, k, cfg.s, cfg.d, bb::expected_happy({n, k, cfg.s, cfg.d})};
}

void write_analyze_row(std::ostream& out, const AnalyzeRow& r) {
  out << r.n << ',' << format_number(r.delta_hat) << ',' << r.budget << ',' << r.k << ',' << r.s << ',' << r.d << ','
      << format_number(r.expected_happy) << ',' << format_number(r.expected_happy / static_cast<double>(r.s)) << '\n';
}

void write_run_row(std::ostream& out, std::uint64_t seed, const RunMetrics& m) {
  out << seed << ',' << m.slots << ',' << m.attempts << ',' << m.successes << ',' << m.decline_no_host << ','
      << m.decline_collision << ',' << format_number(m.decline_ratio()) << ',' << format_number(m.throughput()) << ','
      << format_number(m.mean_active()) << ',' << m.scheduler_queries << ',' << m.controller_queries << ','
      << m.total_queries() << ',' << (m.truncated ? 1 : 0) << '\n';
}

void write_series(std::ostream& out, const std::vector<SlotMetrics>& series) {
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  for (const SlotMetrics& m : series) {
    attempts += m.attempts;
    successes += m.successes;
    const double delta = attempts == 0 ? 0.0 : static_cast<double>(attempts - successes) / static_cast<double>(attempts);
    out << m.slot << ',' << m.arrivals << ',' << m.departures << ',' << m.attempts << ',' << m.successes << ','
        << m.decline_no_host << ',' << m.decline_collision << ',' << m.queries << ',' << m.controller_queries << ','
        << m.active_schedulers << ',' << m.s << ',' << m.d << ',' << format_number(m.k_estimate) << ',' << m.pending
        << ',' << format_number(m.utilization) << ',' << format_number(delta) << '\n';
  }
}

void write_sizing_rows(std::ostream& out, const SizingReport& report) {
  for (const SizingRun& r : report.runs) out << r.run << ',' << to_string(r.policy) << ',' << r.hosts << '\n';
}

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  if (values.empty()) return a;
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.stderr_ = std::sqrt(ss / (n - 1) / n);
  }
  return a;
}

nlohmann::ordered_json metrics_to_json(const RunMetrics& m) {
  return {
      {"slots", m.slots},
      {"attempts", m.attempts},
      {"successes", m.successes},
      {"decline_no_host", m.decline_no_host},
      {"decline_collision", m.decline_collision},
      {"scheduler_queries", m.scheduler_queries},
      {"controller_queries", m.controller_queries},
      {"truncated", m.truncated},
      {"decline_ratio", m.decline_ratio()},
      {"throughput", m.throughput()},
      {"mean_active", m.mean_active()},
      {"total_queries", m.total_queries()},
  };
}

RunMetrics metrics_from_json(const nlohmann::json& j) {
  RunMetrics m;
  m.slots = j.at("slots").get<std::uint64_t>();
  m.attempts = j.at("attempts").get<std::uint64_t>();
  m.successes = j.at("successes").get<std::uint64_t>();
  m.decline_no_host = j.at("decline_no_host").get<std::uint64_t>();
  m.decline_collision = j.at("decline_collision").get<std::uint64_t>();
  m.scheduler_queries = j.at("scheduler_queries").get<std::uint64_t>();
  m.controller_queries = j.at("controller_queries").get<std::uint64_t>();
  m.truncated = j.at("truncated").get<bool>();
  return m;
}

nlohmann::ordered_json build_manifest(const std::string& preset, const Settings& config_echo,
                                      const std::vector<SeedRun>& runs) {
  nlohmann::ordered_json j;
  j["tool"] = "apsr";
  j["version"] = kToolVersion;
  j["schema"] = kSchemaVersion;
  j["preset"] = preset;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& key : known_keys()) {
    if (const auto it = config_echo.find(key); it != config_echo.end()) config[key] = it->second;
  }
  j["config"] = config;

  nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
  nlohmann::ordered_json per_run = nlohmann::ordered_json::array();
  std::vector<double> delta, throughput, active, queries;
  for (const SeedRun& r : runs) {
    seeds.push_back(r.seed);
    nlohmann::ordered_json row;
    row["seed"] = r.seed;
    row["metrics"] = metrics_to_json(r.metrics);
    per_run.push_back(row);
    delta.push_back(r.metrics.decline_ratio());
    throughput.push_back(r.metrics.throughput());
    active.push_back(r.metrics.mean_active());
    queries.push_back(static_cast<double>(r.metrics.total_queries()));
  }
  j["seeds"] = seeds;
  j["runs"] = per_run;

  auto stat = [](const std::vector<double>& v) {
    const Aggregate a = aggregate(v);
    return nlohmann::ordered_json{{"mean", a.mean}, {"stderr", a.stderr_}};
  };
  j["aggregate"] = {
      {"decline_ratio", stat(delta)},
      {"throughput", stat(throughput)},
      {"mean_active", stat(active)},
      {"total_queries", stat(queries)},
  };
  return j;
}

Settings manifest_settings(const nlohmann::json& manifest) {
  Settings s;
  for (const auto& [key, value] : manifest.at("config").items()) s[key] = value.get<std::string>();
  return s;
}

}  // namespace apsr::cli
