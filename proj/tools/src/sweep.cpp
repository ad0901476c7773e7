#include "apsr/cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace apsr::cli {

void run_sweep(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds, unsigned jobs,
               const Collector& collect) {
  const std::size_t total = seeds.size();
  std::vector<std::optional<RunResult>> done(total);
  std::vector<std::exception_ptr> errors(total);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total || stop.load()) return;
      ExperimentConfig config = base;
      config.seed = seeds[i];
      std::optional<RunResult> result;
      std::exception_ptr error;
      try {
        result = run_experiment(config);
      } catch (...) {
        error = std::current_exception();
      }
      {
        const std::lock_guard lock(mu);
        done[i] = std::move(result);
        errors[i] = error;
      }
      ready.notify_all();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);

  std::exception_ptr failure;
  for (std::size_t i = 0; i < total && !failure; ++i) {
    std::optional<RunResult> result;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return done[i].has_value() || errors[i] != nullptr; });
      if (errors[i]) {
        failure = errors[i];
        stop = true;
        break;
      }
      result = std::move(done[i]);
      done[i].reset();
    }
    try {
      collect(i, seeds[i], std::move(*result));
    } catch (...) {
      failure = std::current_exception();
      stop = true;
    }
  }
  pool.clear();  // joins
  if (failure) std::rethrow_exception(failure);
}

}  // namespace apsr::cli
