#pragma once
#include <memory>
#include <optional>
#include <string>

#include "pex/estimator.hpp"
#include "pex/stopping.hpp"

namespace pex {

enum class Algorithm { Lats, Lagex, Uniform, Ctns, Cge, Ptns, CtnsWlag, CgeWlag };

Algorithm algorithm_from_string(const std::string& name);
std::string algorithm_name(Algorithm alg);
const std::vector<std::string>& algorithm_names();

struct SolverKnobs {
    double ridge_v = 1.0;
    int fw_budget = 300;
    double eta = 1.0;               // AdaGrad learning rate
    double adagrad_eps = 1e-8;
    bool g_analysis = false;        // g(t) = 3 ln t + ln ln t instead of ln t
    ThresholdMode stopping_mode = ThresholdMode::Practical;
    int S0 = 0;                     // 0 = K
    int refresh_every = 1;          // polytope rebuild period
    double multiplier_cap = 100.0;  // B_max fallback
    long horizon_cap = 1000000;
    int step_log_stride = 0;        // 0 = off
    int trace_stride = 0;           // 0 = off
};

struct StepLogEntry {
    long t = 0;
    int arm = 0;
    double Z = 0.0;
    double beta = 0.0;
    double cum_violation = 0.0;
    double rho = 0.0;
};

struct TraceRow {
    long t = 0;
    std::vector<Vector> vertices;
};

struct RunRecord {
    std::string algorithm;
    unsigned long seed = 0;
    long tau = 0;
    bool censored = false;
    Vector recommendation;
    bool correct = false;
    bool feasible = false;
    double cum_violation = 0.0;
    double max_tracking_dev = 0.0;
    bool tracking_ok = true;  // dev <= K(1 + sqrt(t)) at every step
    std::vector<StepLogEntry> step_log;
};

// C-tracking: lowest-index argmin of N_a - cum_alloc_a.
int ctrack_next(const Vector& counts, const Vector& cum_alloc);

// Single-run driver, exposed step by step for tests. One observation is
// consumed per step; all randomness comes from the run-owned generator.
class Runner {
public:
    Runner(Algorithm alg, const BanditInstance& instance, unsigned long seed, const SolverKnobs& knobs);

    void initialize();  // play each arm once
    bool step();        // stop check + one sample; false once stopped/censored
    RunRecord finish();

    long t() const { return estimator_.t; }
    bool stopped() const { return stopped_; }
    const EstimatorState& estimator() const { return estimator_; }
    const Vector& cum_alloc() const { return cum_alloc_; }
    const Vector& multiplier() const { return multiplier_; }
    const Vector& last_omega() const { return omega_; }
    const std::vector<TraceRow>& trace() const { return trace_; }

private:
    void refresh_polytope();
    Vector pick_allocation(int pi_idx);
    void adagrad_update(int pi_idx);
    Vector recommend() const;

    Algorithm alg_;
    const BanditInstance& inst_;
    SolverKnobs knobs_;
    Rng rng_;
    unsigned long seed_;
    EstimatorState estimator_;
    PessimisticModel model_;
    std::unique_ptr<FeasiblePolytope> poly_;
    long poly_built_at_ = -1;
    Vector cum_alloc_;
    Vector multiplier_;
    Vector omega_;        // current allocation target
    Vector adagrad_sq_;   // per-coordinate squared-gradient accumulator
    bool stopped_ = false;
    bool censored_ = false;
    bool initialized_ = false;
    Vector recommendation_;
    double cum_violation_ = 0.0;
    double max_tracking_dev_ = 0.0;
    bool tracking_ok_ = true;
    std::vector<StepLogEntry> step_log_;
    std::vector<TraceRow> trace_;

    bool uses_true_constraints() const;
    bool uses_multiplier() const;
    bool adagrad_family() const;
};

RunRecord run(Algorithm alg, const BanditInstance& instance, unsigned long seed, const SolverKnobs& knobs);

}  // namespace pex
