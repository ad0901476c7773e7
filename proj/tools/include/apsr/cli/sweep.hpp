#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "apsr/sim.hpp"

namespace apsr::cli {

using Collector = std::function<void(std::size_t index, std::uint64_t seed, RunResult&& result)>;

/// Runs `base` once per seed on up to `jobs` worker threads. The collector
/// is invoked on the calling thread, in seed-list order, as soon as a run
/// and all runs before it have finished. A failed run rethrows here after
/// the workers have stopped.
void run_sweep(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds, unsigned jobs,
               const Collector& collect);

}  // namespace apsr::cli
