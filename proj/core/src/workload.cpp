#include "apsr/workload.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "apsr/error.hpp"
#include "apsr/rng.hpp"

namespace apsr {
namespace {

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream is{std::string(line)};
  std::string w;
  while (is >> w) words.push_back(w);
  return words;
}

double parse_real(const std::string& word, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(word, &used);
    if (used != word.size()) throw std::invalid_argument(word);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("dataset line " + std::to_string(line_no) + ": '" + word + "' is not a number");
  }
}

std::uint64_t parse_count(const std::string& word, std::size_t line_no) {
  const double v = parse_real(word, line_no);
  if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
    throw ConfigError("dataset line " + std::to_string(line_no) + ": '" + word + "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

ResourceVector parse_vector(const std::vector<std::string>& words, std::size_t first, std::size_t dims,
                            std::size_t line_no) {
  std::vector<double> values;
  for (std::size_t i = 0; i < dims; ++i) values.push_back(parse_real(words[first + i], line_no));
  try {
    return ResourceVector::from_reals(values);
  } catch (const ModelError& e) {
    throw ConfigError("dataset line " + std::to_string(line_no) + ": " + e.what());
  }
}

/// Shape index sequence realizing the proportions, e.g. {1,1} -> 0,1 and
/// {2,1} -> 0,0,1. Hosts take shapes from it cyclically by id.
std::vector<std::size_t> shape_cycle(const DatasetSpec& spec) {
  std::vector<std::size_t> cycle;
  std::uint32_t rounds = 0;
  for (const HostShape& s : spec.host_shapes) rounds = std::max(rounds, s.proportion);
  for (std::uint32_t r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < spec.host_shapes.size(); ++i) {
      if (r < spec.host_shapes[i].proportion) cycle.push_back(i);
    }
  }
  return cycle;
}

}  // namespace

void DatasetSpec::validate() const {
  if (name.empty()) throw ConfigError("dataset has no name");
  if (resources.empty() || resources.size() > ResourceVector::kMaxDims) {
    throw ConfigError("dataset '" + name + "' must declare 1.." + std::to_string(ResourceVector::kMaxDims) +
                      " resources");
  }
  if (host_shapes.empty()) throw ConfigError("dataset '" + name + "' declares no host shape");
  if (flavors.empty()) throw ConfigError("dataset '" + name + "' has no flavors");
  for (const HostShape& s : host_shapes) {
    if (s.capacity.dims() != dims()) throw ConfigError("host shape dimension mismatch in '" + name + "'");
    for (std::size_t j = 0; j < dims(); ++j) {
      if (s.capacity.units(j) <= 0) throw ConfigError("host shapes need positive capacity in every resource");
    }
    if (s.proportion == 0) throw ConfigError("host shape proportion must be positive");
  }
  std::set<std::string> class_names;
  for (const RequestClass& c : classes) {
    if (!class_names.insert(c.name).second) throw ConfigError("duplicate class '" + c.name + "'");
  }
  std::map<std::string, std::uint64_t> class_weight;
  for (const DatasetFlavor& f : flavors) {
    if (f.demand.dims() != dims()) throw ConfigError("flavor dimension mismatch in '" + name + "'");
    if (!f.demand.any_positive()) throw ConfigError("flavor with all-zero demand in '" + name + "'");
    if (f.count == 0) throw ConfigError("flavor counts must be positive in '" + name + "'");
    if (!f.request_class.empty()) {
      if (!class_names.contains(f.request_class)) {
        throw ConfigError("flavor refers to undeclared class '" + f.request_class + "'");
      }
      class_weight[f.request_class] += f.count;
    }
    const bool fits_some_shape = std::ranges::any_of(
        host_shapes, [&](const HostShape& s) { return f.demand.fits_within(s.capacity); });
    if (!fits_some_shape) throw ConfigError("flavor " + f.demand.to_string() + " fits no host shape");
  }
  for (const RequestClass& c : classes) {
    if (c.per_replica > 0 && class_weight[c.name] == 0) {
      throw ConfigError("class '" + c.name + "' has requests but no flavors");
    }
  }
}

std::vector<Flavor> DatasetSpec::flavor_set() const {
  std::vector<Flavor> out;
  out.reserve(flavors.size());
  for (std::size_t i = 0; i < flavors.size(); ++i) out.push_back({static_cast<FlavorId>(i), flavors[i].demand});
  return out;
}

std::uint64_t DatasetSpec::requests_per_replica() const {
  std::uint64_t total = 0;
  for (const DatasetFlavor& f : flavors) {
    if (f.request_class.empty()) total += f.count;
  }
  for (const RequestClass& c : classes) total += c.per_replica;
  return total;
}

DatasetSpec parse_dataset(std::string_view text) {
  DatasetSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto words = split_words(line);
    if (words.empty()) continue;
    const std::string& head = words.front();
    const auto where = " (line " + std::to_string(line_no) + ")";

    if (head == "name") {
      if (words.size() != 2) throw ConfigError("'name' takes one word" + where);
      spec.name = words[1];
    } else if (head == "resources") {
      if (words.size() < 2) throw ConfigError("'resources' needs at least one name" + where);
      if (!spec.flavors.empty() || !spec.host_shapes.empty()) {
        throw ConfigError("'resources' must precede hosts and flavors" + where);
      }
      spec.resources.assign(words.begin() + 1, words.end());
    } else if (head == "host") {
      if (spec.resources.empty()) throw ConfigError("'host' before 'resources'" + where);
      if (words.size() != spec.dims() + 2) {
        throw ConfigError("'host' needs " + std::to_string(spec.dims()) + " capacities and a proportion" + where);
      }
      const auto proportion = parse_count(words.back(), line_no);
      spec.host_shapes.push_back({parse_vector(words, 1, spec.dims(), line_no), static_cast<std::uint32_t>(proportion)});
    } else if (head == "class") {
      if (words.size() != 3) throw ConfigError("'class' takes a name and a per-replica count" + where);
      spec.classes.push_back({words[1], parse_count(words[2], line_no)});
    } else {
      if (spec.resources.empty()) throw ConfigError("flavor row before 'resources'" + where);
      if (words.size() != spec.dims() + 1 && words.size() != spec.dims() + 2) {
        throw ConfigError("flavor rows need " + std::to_string(spec.dims()) + " values, a count, and an optional class" +
                          where);
      }
      DatasetFlavor f;
      f.demand = parse_vector(words, 0, spec.dims(), line_no);
      f.count = parse_count(words[spec.dims()], line_no);
      if (words.size() == spec.dims() + 2) f.request_class = words.back();
      spec.flavors.push_back(std::move(f));
    }
  }
  spec.validate();
  return spec;
}

DatasetSpec load_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

std::string format_dataset(const DatasetSpec& spec) {
  std::ostringstream os;
  os << "name " << spec.name << "\nresources";
  for (const auto& r : spec.resources) os << ' ' << r;
  os << '\n';
  for (const HostShape& s : spec.host_shapes) {
    os << "host";
    for (double v : s.capacity.to_reals()) os << ' ' << v;
    os << ' ' << s.proportion << '\n';
  }
  for (const RequestClass& c : spec.classes) os << "class " << c.name << ' ' << c.per_replica << '\n';
  for (const DatasetFlavor& f : spec.flavors) {
    for (std::size_t j = 0; j < f.demand.dims(); ++j) os << (j ? " " : "") << f.demand[j];
    os << ' ' << f.count;
    if (!f.request_class.empty()) os << ' ' << f.request_class;
    os << '\n';
  }
  return os.str();
}

std::vector<Host> build_hosts(const DatasetSpec& spec, std::int64_t n) {
  if (n < 1) throw ConfigError("host count must be >= 1");
  const auto cycle = shape_cycle(spec);
  std::vector<Host> hosts;
  hosts.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& cap = spec.host_shapes[cycle[static_cast<std::size_t>(i) % cycle.size()]].capacity;
    hosts.push_back(Host::empty(static_cast<HostId>(i), cap));
  }
  return hosts;
}

std::vector<Request> build_trace(const DatasetSpec& spec, std::int64_t replicas, std::uint64_t seed) {
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  Rng rng(derive_seed(seed, {0x7472616365ULL}));

  // Draw weights per class, in flavor order.
  std::map<std::string, std::pair<std::vector<FlavorId>, std::vector<double>>> class_members;
  for (std::size_t i = 0; i < spec.flavors.size(); ++i) {
    const auto& f = spec.flavors[i];
    if (f.request_class.empty()) continue;
    auto& [ids, weights] = class_members[f.request_class];
    ids.push_back(static_cast<FlavorId>(i));
    weights.push_back(static_cast<double>(f.count));
  }

  std::vector<FlavorId> flavors;
  flavors.reserve(spec.requests_per_replica() * static_cast<std::uint64_t>(replicas));
  for (std::int64_t r = 0; r < replicas; ++r) {
    for (std::size_t i = 0; i < spec.flavors.size(); ++i) {
      if (!spec.flavors[i].request_class.empty()) continue;
      flavors.insert(flavors.end(), spec.flavors[i].count, static_cast<FlavorId>(i));
    }
    for (const RequestClass& c : spec.classes) {
      if (c.per_replica == 0) continue;
      const auto& [ids, weights] = class_members.at(c.name);
      std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
      for (std::uint64_t j = 0; j < c.per_replica; ++j) flavors.push_back(ids[pick(rng)]);
    }
  }
  std::shuffle(flavors.begin(), flavors.end(), rng);

  std::vector<Request> trace;
  trace.reserve(flavors.size());
  for (std::size_t i = 0; i < flavors.size(); ++i) trace.push_back({static_cast<RequestId>(i), flavors[i], 0, {}});
  return trace;
}

void ArrivalProcess::validate() const {
  if (!(rate > 0.0)) throw ConfigError("arrival rate lambda_a must be > 0");
  if (kind == Kind::kMmpp) {
    if (!(low_rate > 0.0)) throw ConfigError("MMPP low rate must be > 0");
    if (!(switch_fraction >= 0.0 && switch_fraction <= 1.0)) throw ConfigError("MMPP switch fraction must lie in [0, 1]");
  }
}

std::vector<std::uint32_t> build_arrivals(const ArrivalProcess& process, std::uint64_t trace_length,
                                          std::uint64_t seed) {
  process.validate();
  if (trace_length < 1) throw ConfigError("trace must contain at least one request");
  Rng rng(derive_seed(seed, {0x617272ULL}));
  std::poisson_distribution<std::uint32_t> high(process.rate);
  std::poisson_distribution<std::uint32_t> low(process.kind == ArrivalProcess::Kind::kMmpp ? process.low_rate : process.rate);
  const double switch_at = process.switch_fraction * static_cast<double>(trace_length);

  std::vector<std::uint32_t> counts;
  std::uint64_t arrived = 0;
  while (arrived < trace_length) {
    const bool opening = process.kind == ArrivalProcess::Kind::kPoisson || static_cast<double>(arrived) < switch_at;
    std::uint64_t c = opening ? high(rng) : low(rng);
    c = std::min(c, trace_length - arrived);
    counts.push_back(static_cast<std::uint32_t>(c));
    arrived += c;
  }
  return counts;
}

std::int64_t size_one_pass(const DatasetSpec& spec, const std::vector<Request>& trace, const PolicyConfig& policy,
                           std::uint64_t seed, std::int64_t initial_hosts) {
  if (!policy.needs_full_snapshot()) throw ConfigError("host sizing needs a full-snapshot policy");
  const auto cycle = shape_cycle(spec);
  const auto flavors = spec.flavor_set();
  std::vector<Host> hosts;
  auto open_host = [&](const ResourceVector& demand) {
    for (std::size_t attempt = 0; attempt < cycle.size(); ++attempt) {
      const auto& cap = spec.host_shapes[cycle[(hosts.size() + attempt) % cycle.size()]].capacity;
      if (demand.fits_within(cap)) {
        hosts.push_back(Host::empty(static_cast<HostId>(hosts.size()), cap));
        return;
      }
    }
    throw ConfigError("flavor " + demand.to_string() + " fits no host shape");
  };
  for (std::int64_t i = 0; i < initial_hosts; ++i) {
    hosts.push_back(Host::empty(static_cast<HostId>(i), spec.host_shapes[cycle[static_cast<std::size_t>(i) % cycle.size()]].capacity));
  }

  Rng rng(seed);
  for (const Request& r : trace) {
    const ResourceVector& demand = flavors.at(r.flavor).demand;
    auto target = choose(policy, HostView{hosts, ViewKind::kFullSnapshot}, demand, rng);
    if (!target) {
      open_host(demand);
      target = hosts.back().id;
    }
    hosts[*target].available -= demand;
  }
  return static_cast<std::int64_t>(hosts.size());
}

SizingReport size_hosts(const DatasetSpec& spec, std::int64_t replicas, const std::vector<PolicyConfig>& policies,
                        std::int64_t runs, std::uint64_t seed) {
  if (runs < 1) throw ConfigError("size_hosts needs at least one run");
  if (policies.empty()) throw ConfigError("size_hosts needs at least one policy");
  SizingReport report;
  report.min_hosts = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t run = 0; run < runs; ++run) {
    const auto trace = build_trace(spec, replicas, derive_seed(seed, {static_cast<std::uint64_t>(run)}));
    for (std::size_t p = 0; p < policies.size(); ++p) {
      const auto policy_seed = derive_seed(seed, {static_cast<std::uint64_t>(run), p + 1});
      const auto count = size_one_pass(spec, trace, policies[p], policy_seed);
      report.runs.push_back({run, policies[p].kind, count});
      report.min_hosts = std::min(report.min_hosts, count);
    }
  }
  return report;
}

}  // namespace apsr
