#pragma once
#include <string>
#include <vector>

#include "pex/bandit.hpp"
#include "pex/samplers.hpp"

namespace pex {

// v_t = max_i [A^i omega]_+ ; zero when omega is feasible or d = 0.
double violation_increment(const Matrix& A_true, const Vector& omega);

// Shadow price Gamma_max / Gamma_min of the slack vector; 1 when d = 0.
double shadow_price(const BanditInstance& instance);

struct Summary {
    std::string algorithm;
    int n_seeds = 0;
    double median_tau = 0.0;
    double std_tau = 0.0;
    double mean_violation = 0.0;
    double error_rate = 0.0;
    int censored = 0;
};

// Median and population std over uncensored stopping times; error rate and
// mean violation over all records. All-censored input leaves the tau fields
// NaN with the censored count set.
Summary summarize(const std::vector<RunRecord>& records);

struct ComplexityDiagnostics {
    double shadow_price = 1.0;
    double gap_complexity_H = 0.0;  // 2 sigma2 / sum of squared suboptimality gaps
    double condition_number = 1.0;  // of the active-row matrix at the optimal vertex
    double c_known = 0.0;           // min over neighbors of the projected-gap norm
};

ComplexityDiagnostics complexity_diagnostics(const BanditInstance& instance);

}  // namespace pex
