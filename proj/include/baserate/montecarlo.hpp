#pragma once

// Seeded frequentist oracle: draw a building stock and run an imperfect
// detector over it, tallying an empirical confusion matrix.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "baserate/core_metrics.hpp"

namespace baserate::montecarlo {

/// Identifier recorded in golden files; tallies depend on it.
inline constexpr const char* kGeneratorId = "splitmix64-counter-v1";

/// Counter-based uniform stream. The value at (seed, counter) is a pure
/// function of its arguments: SplitMix64 jumped straight to position
/// `counter` under a key derived from `seed`. Period 2^64 per seed.
class CounterStream {
public:
    explicit CounterStream(std::uint64_t seed) noexcept;

    std::uint64_t bits(std::uint64_t counter) const noexcept;
    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform(std::uint64_t counter) const noexcept;

private:
    std::uint64_t key_;
};

struct SimulationConfig {
    DetectorProfile profile;
    Population population;
    std::uint64_t seed = 0;
    std::size_t chunk_size = 65536;
    /// 0 picks std::thread::hardware_concurrency(). Does not affect results.
    unsigned workers = 1;
};

struct SimulationResult {
    EmpiricalCounts counts;
    MetricsReport empirical_metrics;
    /// sqrt(p(1-p)/(tp+fp)) for empirical precision p; undefined when nothing was flagged.
    MaybeValue standard_error_precision;
};

/// Largest population whose tallies fit the signed 64-bit count cells.
inline constexpr std::uint64_t kMaxPopulation = static_cast<std::uint64_t>(INT64_MAX);

/// Throws std::invalid_argument for chunk_size = 0 and std::overflow_error
/// when the population cannot be tallied without wrapping.
SimulationResult simulate(const SimulationConfig& config);

struct ConvergenceRow {
    std::uint64_t n = 0;
    MaybeValue empirical_precision;
    MaybeValue closed_form_precision;
    MaybeValue abs_error;
};

/// One simulation per population size, all with the config's seed. n_grid
/// must be nonempty and strictly ascending.
std::vector<ConvergenceRow> convergence_report(const SimulationConfig& config,
                                               std::span<const std::uint64_t> n_grid);

std::string convergence_csv(std::span<const ConvergenceRow> rows);

/// Golden tally file: one header row and one data row,
/// seed,generator,tpr,fpr,base_rate,n,tp,fn,fp,tn.
std::string golden_csv(const SimulationConfig& config, const SimulationResult& result);

struct GoldenRecord {
    std::uint64_t seed = 0;
    std::string generator;
    double tpr = 0.0;
    double fpr = 0.0;
    double base_rate = 0.0;
    std::uint64_t n = 0;
    EmpiricalCounts counts;
};

GoldenRecord parse_golden_csv(std::istream& in);

}  // namespace baserate::montecarlo
