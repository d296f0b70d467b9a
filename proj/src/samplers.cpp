#include "pex/samplers.hpp"

#include <cmath>
#include <limits>

#include "pex/metrics.hpp"

namespace pex {
namespace {

const std::vector<std::pair<std::string, Algorithm>> kAlgorithms = {
    {"lats", Algorithm::Lats},         {"lagex", Algorithm::Lagex}, {"uniform", Algorithm::Uniform},
    {"ctns", Algorithm::Ctns},         {"cge", Algorithm::Cge},     {"ptns", Algorithm::Ptns},
    {"ctns_wlag", Algorithm::CtnsWlag}, {"cge_wlag", Algorithm::CgeWlag},
};

}  // namespace

Algorithm algorithm_from_string(const std::string& name) {
    for (const auto& [n, a] : kAlgorithms) {
        if (n == name) return a;
    }
    throw std::invalid_argument("unknown algorithm id: " + name);
}

std::string algorithm_name(Algorithm alg) {
    for (const auto& [n, a] : kAlgorithms) {
        if (a == alg) return n;
    }
    return "?";
}

const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [n, a] : kAlgorithms) out.push_back(n);
        return out;
    }();
    return names;
}

int ctrack_next(const Vector& counts, const Vector& cum_alloc) {
    if (counts.size() != cum_alloc.size()) throw std::invalid_argument("ctrack_next: length mismatch");
    int best = 0;
    double best_val = counts(0) - cum_alloc(0);
    for (int a = 1; a < counts.size(); ++a) {
        const double val = counts(a) - cum_alloc(a);
        if (val < best_val) {
            best_val = val;
            best = a;
        }
    }
    return best;
}

bool Runner::uses_true_constraints() const { return alg_ == Algorithm::Ctns || alg_ == Algorithm::Cge; }

bool Runner::uses_multiplier() const { return alg_ == Algorithm::Lats || alg_ == Algorithm::Lagex; }

bool Runner::adagrad_family() const {
    return alg_ == Algorithm::Lagex || alg_ == Algorithm::Cge || alg_ == Algorithm::CgeWlag;
}

Runner::Runner(Algorithm alg, const BanditInstance& instance, unsigned long seed, const SolverKnobs& knobs)
    : alg_(alg), inst_(instance), knobs_(knobs), rng_(seed), seed_(seed),
      estimator_(instance.K, instance.d, knobs.ridge_v) {
    if (knobs_.horizon_cap < inst_.K) throw std::invalid_argument("runner: horizon cap must be >= K");
    cum_alloc_ = Vector::Zero(inst_.K);
    multiplier_ = Vector::Zero(inst_.d);
    omega_ = Vector::Constant(inst_.K, 1.0 / inst_.K);
    adagrad_sq_ = Vector::Zero(inst_.K);
    recommendation_ = Vector::Zero(inst_.K);
}

void Runner::refresh_polytope() {
    if (uses_true_constraints()) {
        if (!poly_) poly_ = std::make_unique<FeasiblePolytope>(inst_.feasible_polytope());
        model_.mu_hat = estimator_.mu_hat();
        model_.A_hat = inst_.constraints;
        model_.A_tilde = inst_.constraints;
        model_.f_radius = 0.0;
        return;
    }
    const bool due = !poly_ || (estimator_.t - poly_built_at_) >= knobs_.refresh_every;
    model_ = pessimistic_matrix(estimator_, inst_.delta);
    if (!due) return;
    std::vector<Halfspace> rows;
    rows.reserve(inst_.d);
    for (int i = 0; i < inst_.d; ++i) rows.push_back({model_.A_tilde.row(i).transpose(), 0.0});
    try {
        poly_ = std::make_unique<FeasiblePolytope>(FeasiblePolytope::enumerate_vertices(rows, inst_.K));
    } catch (const InfeasibleError&) {
        // Freak numerical event: the pessimistic set always contains the
        // simplex corners early on. Fall back to the bare simplex.
        poly_ = std::make_unique<FeasiblePolytope>(simplex_polytope(inst_.K));
    }
    poly_built_at_ = estimator_.t;
}

Vector Runner::recommend() const {
    // The final answer comes from the unregularized sample means: the
    // pessimistic shift guards exploration and stopping, but its vertices
    // sit strictly outside the estimated set and never satisfy the true
    // constraints, and the per-arm ridge factor N_a/(v+N_a) skews the
    // constraint geometry. Post-initialization every arm has N_a >= 1.
    const Vector mu = (estimator_.reward_sums.array() / estimator_.counts.array().max(1.0)).matrix();
    Matrix A = inst_.constraints;
    if (!uses_true_constraints()) {
        A = estimator_.cost_sums;
        for (int a = 0; a < inst_.K; ++a) A.col(a) /= std::max(estimator_.counts(a), 1.0);
    }
    try {
        std::vector<Halfspace> rows;
        rows.reserve(inst_.d);
        for (int i = 0; i < inst_.d; ++i) rows.push_back({A.row(i).transpose(), 0.0});
        const FeasiblePolytope poly = FeasiblePolytope::enumerate_vertices(rows, inst_.K);
        return poly.vertices()[poly.argmax_linear(mu).first];
    } catch (const InfeasibleError&) {
        return poly_->vertices()[poly_->argmax_linear(mu).first];
    }
}

void Runner::initialize() {
    for (int a = 0; a < inst_.K; ++a) {
        Observation obs = sample_step(inst_, a, rng_, estimator_.t + 1);
        estimator_.update(obs);
        cum_alloc_(a) += 1.0;  // initialization targets the played arm
    }
    initialized_ = true;
}

Vector Runner::pick_allocation(int pi_idx) {
    AllocationOptions opts;
    opts.budget = knobs_.fw_budget;
    switch (alg_) {
        case Algorithm::Uniform:
            return Vector::Constant(inst_.K, 1.0 / inst_.K);
        case Algorithm::Lats:
        case Algorithm::Ctns:
        case Algorithm::CtnsWlag: {
            const Vector mult = uses_multiplier() ? multiplier_ : Vector(Vector::Zero(inst_.d));
            return optimize_allocation(model_.mu_hat, *poly_, inst_.r, inst_.sigma2, mult, model_.A_tilde,
                                       pi_idx, opts);
        }
        case Algorithm::Ptns: {
            const FeasiblePolytope simplex = simplex_polytope(inst_.K);
            const int bai_idx = simplex.argmax_linear(model_.mu_hat).first;
            const Vector bai = optimize_allocation(model_.mu_hat, simplex, inst_.r, inst_.sigma2, Vector(),
                                                   Matrix(), bai_idx, opts);
            return poly_->project(bai).point;
        }
        case Algorithm::Lagex:
        case Algorithm::Cge:
        case Algorithm::CgeWlag:
            return omega_;
    }
    return omega_;
}

void Runner::adagrad_update(int pi_idx) {
    // Regret-minimizer step against the current confusing instance.
    const Vector mu = estimator_.mu_hat();
    const auto& verts = poly_->vertices();
    const auto& neighbors = poly_->adjacency()[pi_idx];
    int arg = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int n : neighbors) {
        const double term = pair_term(mu, omega_, verts[pi_idx], verts[n], inst_.r, inst_.sigma2);
        if (term < best) {
            best = term;
            arg = n;
        }
    }
    if (arg < 0) return;
    const ConfusingInstance ci =
        confusing_instance(mu, omega_, verts[pi_idx], verts[arg], inst_.r, inst_.sigma2);

    const double t = static_cast<double>(estimator_.t);
    const double g = knobs_.g_analysis ? 3.0 * std::log(t) + std::log(std::log(std::max(t, 3.0)))
                                       : std::log(t);
    Vector U(inst_.K);
    for (int a = 0; a < inst_.K; ++a) {
        const double n_a = estimator_.counts(a);
        const double half = std::sqrt(2.0 * inst_.sigma2 * std::max(g, 0.0) / n_a);
        const double lo = mu(a) - half, hi = mu(a) + half;
        U(a) = std::max({g / n_a, gaussian_kl(lo, ci.lambda(a), inst_.sigma2),
                         gaussian_kl(hi, ci.lambda(a), inst_.sigma2)});
    }
    Vector grad = U;
    if (uses_multiplier() && inst_.d > 0) grad -= model_.A_tilde.transpose() * multiplier_;
    const double span = inst_.mean_box_hi - inst_.mean_box_lo;
    const double Q = span * span / (2.0 * inst_.sigma2);
    grad = grad.cwiseMax(-Q).cwiseMin(Q);
    adagrad_sq_.array() += grad.array().square();
    const Vector stepped =
        omega_.array() + knobs_.eta * grad.array() / (adagrad_sq_.array() + knobs_.adagrad_eps).sqrt();
    if (alg_ == Algorithm::Lagex) {
        omega_ = project_simplex(stepped);
    } else {
        omega_ = poly_->project(stepped).point;
    }
}

bool Runner::step() {
    if (!initialized_) throw std::logic_error("runner: initialize() first");
    if (stopped_ || censored_) return false;
    if (estimator_.t >= knobs_.horizon_cap) {
        censored_ = true;
        refresh_polytope();
        recommendation_ = recommend();
        return false;
    }

    refresh_polytope();
    const Vector mu = model_.mu_hat;
    const long t = estimator_.t;

    if (knobs_.trace_stride > 0 && (t - inst_.K) % knobs_.trace_stride == 0) {
        trace_.push_back({t, poly_->vertices()});
    }

    const double Z = glr_statistic(estimator_.counts, mu, *poly_, inst_.r, inst_.sigma2);
    StoppingConfig scfg{knobs_.stopping_mode, knobs_.S0, inst_.delta};
    const double beta = threshold(scfg, t, estimator_.counts, inst_.K, inst_.d);
    if (Z > beta) {
        stopped_ = true;
        recommendation_ = recommend();
        return false;
    }

    const int pi_idx = poly_->argmax_linear(mu).first;
    const Vector omega_t = pick_allocation(pi_idx);
    omega_ = omega_t;

    if (uses_multiplier() && inst_.d > 0) {
        const double D =
            evaluate_D_penalized(omega_t, mu, *poly_, inst_.r, inst_.sigma2, multiplier_, model_.A_tilde)
                .value;
        const double B = multiplier_box(std::max(D, 0.0), model_.A_tilde, omega_t, knobs_.multiplier_cap);
        multiplier_ = multiplier_argmin(model_.A_tilde, omega_t, B);
    }

    cum_alloc_ += omega_t;
    const int arm = ctrack_next(estimator_.counts, cum_alloc_);
    Observation obs = sample_step(inst_, arm, rng_, t + 1);
    estimator_.update(obs);
    cum_violation_ += violation_increment(inst_.constraints, omega_t);

    const double dev = (estimator_.counts - cum_alloc_).lpNorm<Eigen::Infinity>();
    max_tracking_dev_ = std::max(max_tracking_dev_, dev);
    if (dev > inst_.K * (1.0 + std::sqrt(static_cast<double>(estimator_.t)))) tracking_ok_ = false;

    if (adagrad_family()) adagrad_update(pi_idx);

    if (knobs_.step_log_stride > 0 && (estimator_.t - inst_.K) % knobs_.step_log_stride == 0) {
        step_log_.push_back({estimator_.t, arm, Z, beta, cum_violation_,
                             rho_radius(estimator_, inst_.delta, omega_t)});
    }
    return !stopped_;
}

RunRecord Runner::finish() {
    if (!stopped_ && !censored_) {
        // Drain the loop for callers that did not iterate themselves.
        while (step()) {
        }
        if (!stopped_ && !censored_) {
            censored_ = true;
            refresh_polytope();
            recommendation_ = recommend();
        }
    }
    RunRecord rec;
    rec.algorithm = algorithm_name(alg_);
    rec.seed = seed_;
    rec.tau = estimator_.t;
    rec.censored = censored_;
    rec.recommendation = recommendation_;
    rec.cum_violation = cum_violation_;
    rec.max_tracking_dev = max_tracking_dev_;
    rec.tracking_ok = tracking_ok_;
    rec.step_log = std::move(step_log_);

    rec.feasible = inst_.d == 0 || (inst_.constraints * recommendation_).maxCoeff() <= 1e-7;
    const FeasiblePolytope true_poly = inst_.feasible_polytope();
    const double best = true_poly.argmax_linear(inst_.means).second;
    rec.correct = true_poly.contains(recommendation_, 1e-7) &&
                  inst_.means.dot(recommendation_) + inst_.r >= best - 1e-9;
    return rec;
}

RunRecord run(Algorithm alg, const BanditInstance& instance, unsigned long seed, const SolverKnobs& knobs) {
    Runner runner(alg, instance, seed, knobs);
    runner.initialize();
    while (runner.step()) {
    }
    return runner.finish();
}

}  // namespace pex
