#include "pex/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace pex {
namespace fs = std::filesystem;

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

namespace {

struct Task {
    Algorithm alg;
    unsigned long seed;
};

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << contents;
    if (!out) throw IoError("write failed: " + path);
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::string out = "t,n_vertices,coords\n";
    for (const auto& row : trace) {
        out += std::to_string(row.t) + "," + std::to_string(row.vertices.size());
        for (const auto& v : row.vertices) {
            for (int a = 0; a < v.size(); ++a) out += "," + format_double(v(a));
        }
        out += "\n";
    }
    return out;
}

}  // namespace

std::vector<RunRecord> run_all(const ExperimentConfig& cfg) {
    const BanditInstance instance = build_instance(cfg.env);
    std::vector<Task> tasks;
    for (Algorithm alg : cfg.algorithms) {
        for (int i = 0; i < cfg.seeds; ++i) tasks.push_back({alg, cfg.base_seed + i});
    }
    std::vector<RunRecord> records(tasks.size());
    std::vector<std::vector<TraceRow>> traces(tasks.size());

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int n_threads = std::max(1, std::min<int>(cfg.parallel > 0 ? cfg.parallel : hw,
                                                    static_cast<int>(tasks.size())));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
            if (cfg.knobs.trace_stride > 0) {
                Runner runner(tasks[i].alg, instance, tasks[i].seed, cfg.knobs);
                runner.initialize();
                while (runner.step()) {
                }
                traces[i] = runner.trace();
                records[i] = runner.finish();
            } else {
                records[i] = run(tasks[i].alg, instance, tasks[i].seed, cfg.knobs);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    if (cfg.knobs.trace_stride > 0 && !cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        for (size_t i = 0; i < tasks.size(); ++i) {
            const std::string path = (fs::path(cfg.out_dir) /
                                      ("trace_" + algorithm_name(tasks[i].alg) + "_" +
                                       std::to_string(tasks[i].seed) + ".csv"))
                                         .string();
            write_file(path, trace_csv(traces[i]));
        }
    }
    std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.algorithm, a.seed) < std::tie(b.algorithm, b.seed);
    });
    return records;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult result;
    result.records = run_all(cfg);

    std::string rows = "algorithm,seed,tau,correct,feasible,cum_violation,censored\n";
    for (const auto& rec : result.records) {
        rows += rec.algorithm + "," + std::to_string(rec.seed) + "," + std::to_string(rec.tau) + "," +
                (rec.correct ? "1" : "0") + "," + (rec.feasible ? "1" : "0") + "," +
                format_double(rec.cum_violation) + "," + (rec.censored ? "1" : "0") + "\n";
    }

    std::string summary = "algorithm,n_seeds,median_tau,std_tau,mean_violation,error_rate,censored\n";
    std::vector<RunRecord> group;
    auto flush_group = [&] {
        if (group.empty()) return;
        const Summary s = summarize(group);
        result.summaries.push_back(s);
        summary += s.algorithm + "," + std::to_string(s.n_seeds) + "," + format_double(s.median_tau) +
                   "," + format_double(s.std_tau) + "," + format_double(s.mean_violation) + "," +
                   format_double(s.error_rate) + "," + std::to_string(s.censored) + "\n";
        group.clear();
    };
    for (const auto& rec : result.records) {
        if (!group.empty() && group.front().algorithm != rec.algorithm) flush_group();
        group.push_back(rec);
    }
    flush_group();

    try {
        fs::create_directories(cfg.out_dir);
    } catch (const fs::filesystem_error& e) {
        throw IoError(std::string("cannot create output dir: ") + e.what());
    }
    result.results_path = (fs::path(cfg.out_dir) / "results.csv").string();
    result.summary_path = (fs::path(cfg.out_dir) / "summary.csv").string();
    write_file(result.results_path, rows);
    write_file(result.summary_path, summary);
    return result;
}

std::vector<SweepRow> sweep_lowerbound(const ExperimentConfig& cfg, int arm, double lo, double hi,
                                       int steps) {
    const int K = static_cast<int>(cfg.env.means.size());
    if (arm < 1 || arm > K) throw ConfigError("sweep arm out of range");
    if (steps < 1) throw ConfigError("sweep needs at least one grid point");
    std::vector<SweepRow> rows;
    const FeasiblePolytope simplex = simplex_polytope(K);
    for (int k = 0; k < steps; ++k) {
        SweepRow row;
        row.mu = steps == 1 ? lo : lo + k * (hi - lo) / (steps - 1);
        EnvironmentSpec env = cfg.env;
        env.means(arm - 1) = row.mu;
        env.mean_box_lo = 0.0;  // rederive around the swept means
        env.mean_box_hi = 0.0;
        const BanditInstance inst = build_instance(env);
        row.constrained = characteristic_time(inst.means, inst.feasible_polytope(), inst.r, inst.sigma2);
        row.bai = characteristic_time(inst.means, simplex, inst.r, inst.sigma2);
        rows.push_back(row);
    }
    return rows;
}

std::string write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& out_dir) {
    std::string body = "mu,T_constrained,T_BAI\n";
    for (const auto& row : rows) {
        body += format_double(row.mu) + "," +
                (row.constrained.infinite ? "inf" : format_double(row.constrained.T)) + "," +
                (row.bai.infinite ? "inf" : format_double(row.bai.T)) + "\n";
    }
    fs::create_directories(out_dir);
    const std::string path = (fs::path(out_dir) / "sweep_lowerbound.csv").string();
    write_file(path, body);
    return path;
}

}  // namespace pex
