// apsr: command-line front end for the analytic tables, simulations, and
// host sizing.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "apsr/balls_bins.hpp"
#include "apsr/cli/config.hpp"
#include "apsr/cli/report.hpp"
#include "apsr/cli/sweep.hpp"
#include "apsr/error.hpp"
#include "apsr/workload.hpp"

namespace fs = std::filesystem;
using namespace apsr;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

class RuntimeFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write '" + path.string() + "'");
  return out;
}

struct AnalyzeArgs {
  std::int64_t n = 0;
  double delta_hat = 0.05;
  std::int64_t budget = 0;
  std::string k = "all";
  std::string out;
};

void cmd_analyze(const AnalyzeArgs& a) {
  if (a.n < 1) throw ConfigError("--n must be >= 1");
  const std::int64_t budget = a.budget > 0 ? a.budget : a.n;
  if (budget > a.n) throw ConfigError("--budget may not exceed n");
  bb::SlaBudget{a.delta_hat, budget}.validate();
  const auto ks = cli::parse_k_grid(a.k, a.n);

  std::ofstream file;
  if (!a.out.empty()) file = open_out(a.out);
  std::ostream& out = a.out.empty() ? std::cout : file;
  out << cli::analyze_header() << '\n';
  for (const auto k : ks) cli::write_analyze_row(out, cli::analyze_row(a.n, a.delta_hat, budget, k));
}

struct SimulateArgs {
  std::string preset;
  std::string config;
  std::vector<std::string> sets;
  std::string seeds;
  std::string out = "results";
  unsigned jobs = 0;
  bool no_series = false;
  bool print_config = false;
  bool list_presets = false;
};

void cmd_simulate(const SimulateArgs& a) {
  if (a.list_presets) {
    for (const auto& name : cli::preset_names()) std::cout << name << '\n';
    return;
  }
  cli::Settings settings = a.preset.empty() ? cli::default_settings() : cli::preset(a.preset);
  if (!a.config.empty()) settings = cli::merge(std::move(settings), cli::load_settings_file(a.config));
  for (const auto& s : a.sets) cli::apply_override(settings, s);
  const ExperimentConfig base = cli::to_experiment(settings);
  const auto echo = cli::to_settings(base);
  if (a.print_config) {
    std::cout << cli::format_settings(echo);
    return;
  }
  const std::vector<std::uint64_t> seeds = a.seeds.empty() ? std::vector<std::uint64_t>{base.seed}
                                                           : cli::parse_seed_list(a.seeds);

  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeFailure("cannot create '" + dir.string() + "': " + ec.message());

  std::ofstream runs_csv = open_out(dir / "runs.csv");
  runs_csv << cli::runs_header() << '\n';
  std::vector<cli::SeedRun> finished;

  auto write_manifest = [&] {
    std::ofstream m = open_out(dir / "manifest.json");
    m << cli::build_manifest(a.preset, echo, finished).dump(2) << '\n';
  };

  const unsigned jobs = a.jobs > 0 ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::cerr << "simulate: " << seeds.size() << " run(s), " << jobs << " worker(s), output in " << dir.string() << '\n';
  cli::run_sweep(base, seeds, jobs, [&](std::size_t index, std::uint64_t seed, RunResult&& result) {
    cli::write_run_row(runs_csv, seed, result.metrics);
    runs_csv.flush();
    if (!a.no_series) {
      std::ofstream series = open_out(dir / ("series_seed" + std::to_string(seed) + ".csv"));
      series << cli::series_header() << '\n';
      cli::write_series(series, result.series);
    }
    finished.push_back({seed, result.metrics});
    write_manifest();
    std::cerr << "  [" << index + 1 << "/" << seeds.size() << "] seed " << seed
              << ": decline ratio " << cli::format_number(result.metrics.decline_ratio()) << ", throughput "
              << cli::format_number(result.metrics.throughput()) << (result.metrics.truncated ? " (truncated)" : "")
              << '\n';
  });
  if (!runs_csv) throw RuntimeFailure("write to runs.csv failed");
}

struct SizeArgs {
  std::string dataset = "nfv";
  std::string dataset_file;
  std::int64_t replicas = 1;
  std::int64_t runs = 10;
  std::uint64_t seed = 1;
  std::string policies = "ff,wf,random";
  std::string csv;
};

void cmd_size_hosts(const SizeArgs& a) {
  const DatasetSpec spec = a.dataset_file.empty() ? builtin_dataset(a.dataset) : load_dataset_file(a.dataset_file);
  std::vector<PolicyConfig> policies;
  std::istringstream list(a.policies);
  std::string word;
  while (std::getline(list, word, ',')) {
    PolicyConfig p;
    p.kind = parse_policy_kind(word);
    policies.push_back(p);
  }
  const SizingReport report = size_hosts(spec, a.replicas, policies, a.runs, a.seed);
  if (!a.csv.empty()) {
    std::ofstream out = open_out(a.csv);
    out << cli::sizing_header() << '\n';
    cli::write_sizing_rows(out, report);
  }
  std::cout << report.min_hosts << '\n';
}

void cmd_datasets(const std::string& show) {
  if (!show.empty()) {
    std::cout << builtin_dataset_text(show);
    return;
  }
  for (const auto& name : builtin_dataset_names()) {
    const auto spec = builtin_dataset(name);
    std::cout << name << "  flavors=" << spec.flavors.size() << "  requests_per_replica=" << spec.requests_per_replica()
              << "  hosts_eval=" << preset_host_count(name, "eval") << "  hosts_study=" << preset_host_count(name, "study")
              << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel placement simulator and analytic tools"};
  app.set_version_flag("--version", cli::kToolVersion);
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Fleet configuration (s, d) and E[H] over a grid of k");
  an->add_option("--n", analyze.n, "Number of hosts")->required();
  an->add_option("--delta-hat", analyze.delta_hat, "Target decline ratio")->capture_default_str();
  an->add_option("--budget", analyze.budget, "Query budget B (default n)");
  an->add_option("--k", analyze.k, "k grid: all | v | v1,v2,... | lo:hi[:step]")->capture_default_str();
  an->add_option("--out", analyze.out, "CSV file (default stdout)");

  SimulateArgs simulate;
  auto* sim = app.add_subcommand("simulate", "Run simulations over a list of seeds");
  sim->add_option("--preset", simulate.preset, "Named experiment preset");
  sim->add_option("--config", simulate.config, "key = value config file");
  sim->add_option("--set", simulate.sets, "Override one key (key=value); repeatable");
  sim->add_option("--seeds", simulate.seeds, "Seeds: n | a,b,c | lo..hi (default: config seed)");
  sim->add_option("--out", simulate.out, "Output directory")->capture_default_str();
  sim->add_option("--jobs", simulate.jobs, "Parallel runs (default: hardware threads)");
  sim->add_flag("--no-series", simulate.no_series, "Skip per-slot series files");
  sim->add_flag("--print-config", simulate.print_config, "Print the resolved config and exit");
  sim->add_flag("--list-presets", simulate.list_presets, "List presets and exit");

  SizeArgs size;
  auto* sz = app.add_subcommand("size-hosts", "Estimate the host count needed to place a whole trace");
  sz->add_option("--dataset", size.dataset)->capture_default_str();
  sz->add_option("--dataset-file", size.dataset_file, "User dataset table");
  sz->add_option("--replicas", size.replicas)->capture_default_str();
  sz->add_option("--runs", size.runs, "Shuffled runs")->capture_default_str();
  sz->add_option("--seed", size.seed)->capture_default_str();
  sz->add_option("--policies", size.policies, "Comma-separated snapshot policies")->capture_default_str();
  sz->add_option("--csv", size.csv, "Per-run CSV detail");

  std::string show;
  auto* ds = app.add_subcommand("datasets", "List or print the embedded dataset tables");
  ds->add_option("--show", show, "Print one table in the dataset file format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*an) cmd_analyze(analyze);
    if (*sim) cmd_simulate(simulate);
    if (*sz) cmd_size_hosts(size);
    if (*ds) cmd_datasets(show);
  } catch (const ConfigError& e) {
    std::cerr << "apsr: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "apsr: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "apsr: error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
