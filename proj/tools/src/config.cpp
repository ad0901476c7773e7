#include "apsr/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "apsr/cli/report.hpp"
#include "apsr/error.hpp"

namespace apsr::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::ranges::transform(s, s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void check_key(const std::string& key) {
  const auto& keys = known_keys();
  if (std::ranges::find(keys, key) == keys.end()) throw ConfigError("unknown config key '" + key + "'");
}

std::int64_t to_int(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  }
  return v;
}

double to_real(const std::string& key, const std::string& text) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

const std::string& get(const Settings& s, const std::string& key) {
  const auto it = s.find(key);
  if (it == s.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

std::int64_t positive_int(const Settings& s, const std::string& key) {
  const auto v = to_int(key, get(s, key));
  if (v < 1) throw ConfigError("'" + key + "' must be >= 1");
  return v;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "dataset", "dataset_file", "replicas",   "hosts",     "arrivals",  "lambda_a", "lambda_a_low",
      "mmpp_switch", "lambda_d", "lifetime",   "policy",    "lambda_rank", "adaptive_threshold", "s",
      "d",       "delta_hat",    "budget",     "T",         "alpha",     "estimator", "seed", "max_slots"};
  return keys;
}

Settings parse_settings(std::string_view text) {
  Settings out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    check_key(key);
    if (value.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    out[key] = value;
  }
  return out;
}

Settings load_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_settings(text.str());
}

void apply_override(Settings& settings, std::string_view assignment) {
  const auto parsed = parse_settings(assignment);
  if (parsed.size() != 1) throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
  settings = merge(std::move(settings), parsed);
}

Settings merge(Settings base, const Settings& overlay) {
  for (const auto& [k, v] : overlay) base[k] = v;
  return base;
}

Settings default_settings() {
  return {{"dataset", "nfv"},  {"replicas", "30"},     {"hosts", "eval"},         {"arrivals", "poisson"},
          {"lambda_a", "20"},  {"lambda_a_low", "5"},  {"mmpp_switch", "0.2"},    {"lambda_d", "0"},
          {"lifetime", "inf"}, {"policy", "apsr"},     {"lambda_rank", "5"},      {"adaptive_threshold", "0.6"},
          {"s", "controller"}, {"d", "0"},             {"delta_hat", "0.05"},     {"budget", "100%"},
          {"T", "10"},         {"alpha", "0.1"},       {"estimator", "min"},      {"seed", "1"},
          {"max_slots", "2000000"}};
}

namespace {

struct Preset {
  std::string_view name;
  std::string_view text;
};

// Random with ten schedulers is the reference column of the decline-ratio
// table; the APSR presets size their own fleet.
constexpr Preset kPresets[] = {
    {"table-v-nfv", "dataset=nfv\nreplicas=30\nhosts=eval\npolicy=random\ns=10\n"},
    {"table-v-google", "dataset=google\nreplicas=1\nhosts=eval\npolicy=random\ns=10\n"},
    {"table-v-amazon", "dataset=amazon\nreplicas=7\nhosts=eval\npolicy=random\ns=10\n"},
    {"table-vi-nfv", "dataset=nfv\nreplicas=30\nhosts=eval\npolicy=apsr\ns=controller\ndelta_hat=0.05\nbudget=100%\n"},
    {"table-vi-google", "dataset=google\nreplicas=1\nhosts=eval\npolicy=apsr\ns=controller\ndelta_hat=0.05\nbudget=100%\n"},
    {"table-vi-amazon", "dataset=amazon\nreplicas=7\nhosts=eval\npolicy=apsr\ns=controller\ndelta_hat=0.05\nbudget=100%\n"},
    {"fig3-mmpp",
     "dataset=nfv\nreplicas=100\nhosts=eval\narrivals=mmpp\nlambda_a=20\nlambda_a_low=5\nmmpp_switch=0.2\n"
     "lambda_d=4\npolicy=apsr\ns=controller\n"},
    {"oracle-nfv", "dataset=nfv\nreplicas=30\nhosts=eval\npolicy=apsr\ns=controller\nestimator=oracle\nT=1\n"},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

Settings preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return merge(default_settings(), parse_settings(p.text));
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

ExperimentConfig to_experiment(const Settings& s) {
  for (const auto& [k, v] : s) check_key(k);
  ExperimentConfig c;

  if (const auto it = s.find("dataset_file"); it != s.end() && !it->second.empty()) c.dataset_file = it->second;
  c.dataset = lower(get(s, "dataset"));
  if (c.dataset_file.empty()) (void)builtin_dataset_text(c.dataset);  // unknown names fail here
  c.replicas = positive_int(s, "replicas");

  const std::string hosts = lower(get(s, "hosts"));
  if (hosts == "eval" || hosts == "study") {
    if (!c.dataset_file.empty()) throw ConfigError("host presets apply to built-in datasets only; give a number");
    c.hosts = preset_host_count(c.dataset, hosts);
  } else {
    c.hosts = positive_int(s, "hosts");
  }

  const std::string arrivals = lower(get(s, "arrivals"));
  if (arrivals == "poisson") {
    c.arrivals.kind = ArrivalProcess::Kind::kPoisson;
  } else if (arrivals == "mmpp") {
    c.arrivals.kind = ArrivalProcess::Kind::kMmpp;
  } else {
    throw ConfigError("'arrivals' must be poisson or mmpp, got '" + arrivals + "'");
  }
  c.arrivals.rate = to_real("lambda_a", get(s, "lambda_a"));
  c.arrivals.low_rate = to_real("lambda_a_low", get(s, "lambda_a_low"));
  c.arrivals.switch_fraction = to_real("mmpp_switch", get(s, "mmpp_switch"));
  c.lambda_d = to_real("lambda_d", get(s, "lambda_d"));

  const std::string lifetime = lower(get(s, "lifetime"));
  if (lifetime == "inf" || lifetime == "infinite") {
    c.lifetime = Lifetime::infinite();
  } else {
    c.lifetime = Lifetime::slots(static_cast<std::uint64_t>(positive_int(s, "lifetime")));
  }

  c.policy.kind = parse_policy_kind(lower(get(s, "policy")));
  c.policy.lambda_rank = static_cast<int>(to_int("lambda_rank", get(s, "lambda_rank")));
  c.policy.adaptive_threshold = to_real("adaptive_threshold", get(s, "adaptive_threshold"));

  const std::string fleet = lower(get(s, "s"));
  c.schedulers = fleet == "controller" ? 0 : positive_int(s, "s");
  c.sample_size = to_int("d", get(s, "d"));

  c.delta_hat = to_real("delta_hat", get(s, "delta_hat"));
  const std::string budget = get(s, "budget");
  if (!budget.empty() && budget.back() == '%') {
    c.budget = 0;
    c.budget_fraction = to_real("budget", budget.substr(0, budget.size() - 1)) / 100.0;
  } else {
    c.budget = positive_int(s, "budget");
  }
  c.period = to_int("T", get(s, "T"));
  c.alpha = to_real("alpha", get(s, "alpha"));
  c.estimator = parse_estimator_mode(lower(get(s, "estimator")));
  const auto seed = to_int("seed", get(s, "seed"));
  if (seed < 0) throw ConfigError("'seed' must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.max_slots = static_cast<std::uint64_t>(positive_int(s, "max_slots"));

  c.validate();
  return c;
}

Settings to_settings(const ExperimentConfig& c) {
  Settings s;
  s["dataset"] = c.dataset;
  if (!c.dataset_file.empty()) s["dataset_file"] = c.dataset_file;
  s["replicas"] = std::to_string(c.replicas);
  s["hosts"] = std::to_string(c.hosts);
  s["arrivals"] = c.arrivals.kind == ArrivalProcess::Kind::kMmpp ? "mmpp" : "poisson";
  s["lambda_a"] = format_number(c.arrivals.rate);
  s["lambda_a_low"] = format_number(c.arrivals.low_rate);
  s["mmpp_switch"] = format_number(c.arrivals.switch_fraction);
  s["lambda_d"] = format_number(c.lambda_d);
  s["lifetime"] = c.lifetime.is_infinite() ? "inf" : std::to_string(c.lifetime.count());
  s["policy"] = std::string(to_string(c.policy.kind));
  s["lambda_rank"] = std::to_string(c.policy.lambda_rank);
  s["adaptive_threshold"] = format_number(c.policy.adaptive_threshold);
  s["s"] = c.controller_managed() ? "controller" : std::to_string(c.schedulers);
  s["d"] = std::to_string(c.sample_size);
  s["delta_hat"] = format_number(c.delta_hat);
  s["budget"] = std::to_string(c.resolved_budget());
  s["T"] = std::to_string(c.period);
  s["alpha"] = format_number(c.alpha);
  s["estimator"] = std::string(to_string(c.estimator));
  s["seed"] = std::to_string(c.seed);
  s["max_slots"] = std::to_string(c.max_slots);
  return s;
}

std::string format_settings(const Settings& settings) {
  std::string out;
  for (const auto& key : known_keys()) {
    if (const auto it = settings.find(key); it != settings.end()) out += key + " = " + it->second + "\n";
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  const std::string t = trim(text);
  std::vector<std::uint64_t> seeds;
  auto number = [](const std::string& word) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (word.empty() || ec != std::errc() || ptr != word.data() + word.size()) {
      throw ConfigError("bad seed '" + word + "'");
    }
    return v;
  };
  if (const auto dots = t.find(".."); dots != std::string::npos) {
    const auto lo = number(trim(t.substr(0, dots)));
    const auto hi = number(trim(t.substr(dots + 2)));
    if (hi < lo) throw ConfigError("empty seed range '" + t + "'");
    if (hi - lo >= 1'000'000) throw ConfigError("seed range too large");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::istringstream in(t);
  std::string word;
  while (std::getline(in, word, ',')) seeds.push_back(number(trim(word)));
  if (seeds.empty()) throw ConfigError("no seeds given");
  return seeds;
}

std::vector<std::int64_t> parse_k_grid(std::string_view text, std::int64_t n) {
  const std::string t = trim(text);
  auto number = [&](const std::string& word) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (word.empty() || ec != std::errc() || ptr != word.data() + word.size()) {
      throw ConfigError("bad k value '" + word + "'");
    }
    if (v < 0 || v > n) throw ConfigError("k = " + word + " lies outside [0, n]");
    return v;
  };
  std::vector<std::int64_t> ks;
  if (t == "all") {
    for (std::int64_t k = 0; k <= n; ++k) ks.push_back(k);
    return ks;
  }
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream in(t);
    std::string word;
    while (std::getline(in, word, ':')) parts.push_back(trim(word));
    if (parts.size() < 2 || parts.size() > 3) throw ConfigError("k range must be lo:hi or lo:hi:step");
    const auto lo = number(parts[0]);
    const auto hi = number(parts[1]);
    std::int64_t step = 1;
    if (parts.size() == 3) {
      step = to_int("k step", parts[2]);
      if (step < 1) throw ConfigError("k step must be >= 1");
    }
    if (hi < lo) throw ConfigError("empty k range '" + t + "'");
    for (std::int64_t k = lo; k <= hi; k += step) ks.push_back(k);
    return ks;
  }
  std::istringstream in(t);
  std::string word;
  while (std::getline(in, word, ',')) ks.push_back(number(trim(word)));
  if (ks.empty()) throw ConfigError("empty k grid");
  return ks;
}

}  // namespace apsr::cli
