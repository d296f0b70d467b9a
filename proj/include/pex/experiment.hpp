#pragma once
#include "pex/config.hpp"
#include "pex/metrics.hpp"

namespace pex {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentResult {
    std::vector<RunRecord> records;    // sorted by (algorithm, seed)
    std::vector<Summary> summaries;    // one per algorithm, same order as records
    std::string results_path;
    std::string summary_path;
};

// Runs every (algorithm, seed) pair, seed-parallel, and writes
// results.csv / summary.csv (plus trace_<alg>_<seed>.csv when the trace
// stride is set) under cfg.out_dir. Output is sorted before writing, so
// reruns of the same config are byte-identical.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Runs the pairs without touching the filesystem.
std::vector<RunRecord> run_all(const ExperimentConfig& cfg);

struct SweepRow {
    double mu = 0.0;
    CharacteristicTime constrained;
    CharacteristicTime bai;
};

// Lower-bound sweep over one arm's mean: the constrained characteristic time
// against the bare-simplex (best-arm) one. `arm` is 1-based.
std::vector<SweepRow> sweep_lowerbound(const ExperimentConfig& cfg, int arm, double lo, double hi,
                                       int steps);
std::string write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& out_dir);

std::string format_double(double x);

}  // namespace pex
