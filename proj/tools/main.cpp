#include <CLI11.hpp>
#include <iostream>

#include "pex/experiment.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, int parallel) {
    pex::ExperimentConfig cfg = pex::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (parallel > 0) cfg.parallel = parallel;
    const pex::ExperimentResult result = pex::run_experiment(cfg);
    std::cout << "wrote " << result.results_path << " and " << result.summary_path << "\n";
    for (const auto& s : result.summaries) {
        std::cout << s.algorithm << ": median tau " << pex::format_double(s.median_tau) << " (std "
                  << pex::format_double(s.std_tau) << "), error rate " << pex::format_double(s.error_rate)
                  << ", mean violation " << pex::format_double(s.mean_violation) << ", censored "
                  << s.censored << "/" << s.n_seeds << "\n";
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int arm, double lo, double hi,
              int steps) {
    pex::ExperimentConfig cfg = pex::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const auto rows = pex::sweep_lowerbound(cfg, arm, lo, hi, steps);
    const std::string path = pex::write_sweep_csv(rows, cfg.out_dir);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_presets() {
    for (const auto& name : pex::preset_names()) {
        const pex::EnvironmentSpec env = pex::preset_environment(name);
        const pex::BanditInstance inst = pex::build_instance(env);
        const auto diag = pex::complexity_diagnostics(inst);
        std::cout << name << ": K=" << inst.K << ", d=" << inst.d << ", delta=" << inst.delta
                  << ", shadow_price=" << pex::format_double(diag.shadow_price) << ", means=[";
        for (int a = 0; a < inst.K; ++a) std::cout << (a ? "," : "") << inst.means(a);
        std::cout << "]\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-confidence pure exploration under unknown linear constraints"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int parallel = 0;
    auto* run_cmd = app.add_subcommand("run", "Run the configured algorithms over all seeds");
    run_cmd->add_option("--config", config_path, "JSON experiment config")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (overrides config)");
    run_cmd->add_option("--parallel", parallel, "Worker threads");

    int arm = 1, steps = 21;
    double lo = 0.0, hi = 1.0;
    auto* sweep_cmd = app.add_subcommand("sweep-lb", "Characteristic-time sweep over one arm's mean");
    sweep_cmd->add_option("--config", config_path, "JSON experiment config")->required();
    sweep_cmd->add_option("--arm", arm, "Swept arm (1-based)")->required();
    sweep_cmd->add_option("--lo", lo, "Grid start")->required();
    sweep_cmd->add_option("--hi", hi, "Grid end")->required();
    sweep_cmd->add_option("--steps", steps, "Grid points")->required();
    sweep_cmd->add_option("--out", out_dir, "Output directory (overrides config)");

    auto* presets_cmd = app.add_subcommand("presets", "List the embedded environments");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(config_path, out_dir, parallel);
        if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_dir, arm, lo, hi, steps);
        if (presets_cmd->parsed()) return cmd_presets();
    } catch (const pex::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
