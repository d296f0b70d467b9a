#pragma once
#include <string>
#include <vector>

#include "pex/samplers.hpp"

namespace pex {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string preset;  // empty when the environment is given inline
    EnvironmentSpec env;
    std::vector<Algorithm> algorithms;
    int seeds = 100;
    unsigned long base_seed = 0;
    SolverKnobs knobs;
    std::string out_dir = "out";
    int parallel = 0;  // 0 = hardware concurrency
};

// Named environments shipped with the simulator. Group constraints are
// stored homogenized against the simplex (rows of A with A pi <= 0).
const std::vector<std::string>& preset_names();
EnvironmentSpec preset_environment(const std::string& name);

// Parses and validates a JSON experiment config. A "preset" key expands to
// the embedded environment; top-level delta/r/sigma2/cost_noise_sd override
// it. PEX_SEED_BASE in the process environment overrides the base seed.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// Homogenizes sum_{a in group} pi_a <= bound (or >= bound) against the
// simplex: (1_group - bound * 1).pi <= 0. Group indices are 1-based.
Vector group_row(const std::vector<int>& group, double bound, bool upper, int K);

}  // namespace pex
