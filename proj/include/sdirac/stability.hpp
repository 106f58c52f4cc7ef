#pragma once

#include <cstdint>
#include <vector>

#include "sdirac/continuous.hpp"
#include "sdirac/discrete.hpp"
#include "sdirac/realization.hpp"

namespace sdirac {

enum class SweepMode { continuous, discrete };

/// One end-to-end stability experiment: perturb the input triple at each
/// delta, re-run the inverse pipeline, and measure how far the recovered
/// quadruple and potential move.
struct SweepConfig {
    Realization base;
    // Strictly descending; entries positive except for an optional trailing
    // zero control row.
    std::vector<double> deltas;
    int trials = 30;
    std::uint64_t seed = 0;
    SweepMode mode = SweepMode::continuous;
    std::size_t grid_samples = 400;  // continuous deviation grid
    double x_max = 0.0;              // 0 = derive from the base potential
    std::size_t K = 0;               // 0 = default_K(n)

    void validate() const;
};

struct DeltaStats {
    double delta = 0.0;
    double quad_median = 0.0;
    double quad_max = 0.0;
    double pot_median = 0.0;
    double pot_max = 0.0;
    int completed = 0;
    int skipped = 0;
};

struct TrialRecord {
    double delta = 0.0;
    int trial = 0;
    double quad_distance = 0.0;
    double potential_dev = 0.0;
    bool skipped = false;
};

struct SweepResult {
    std::vector<DeltaStats> rows;
    std::vector<TrialRecord> trials;  // per-trial data, CSV-ready
    bool trend_pass = false;    // medians non-increasing and tail reduction >= 10x
    bool inconclusive = false;  // more than 20% of trials skipped at some delta
    double quad_reduction = 0.0;  // largest-delta median / smallest-delta median
    double pot_reduction = 0.0;
};

/// Deterministic triple perturbation with summed operator norm delta/2.
Realization perturb_realization(const Realization& r, double delta, std::uint64_t seed);

SweepResult run_sweep(const SweepConfig& cfg);

struct UniquenessTrial {
    double condition = 0.0;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct UniquenessReport {
    std::vector<UniquenessTrial> trials;
    double max_deviation = 0.0;
    bool pass = false;
};

/// Solves the inverse problem from similarity-transformed copies of r and
/// compares the recovered potentials against the untransformed recovery;
/// agreement certifies that the recovery depends on the transfer function
/// only. Transforms are drawn with controlled condition number (<= 100).
UniquenessReport uniqueness_experiment(const Realization& r, int trials, std::uint64_t seed,
                                       SweepMode mode, std::size_t grid_samples = 200,
                                       std::size_t K = 0);

}  // namespace sdirac
