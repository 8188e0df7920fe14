// etgossip: run, validate and bound event-triggered gossip experiments.
//
//   etgossip run --config <path> [--out <path>] [--seed <int>] [--reps <int>]
//   etgossip validate --config <path>
//   etgossip bound --config <path>
//
// Exit status: 0 success, 1 configuration error, 2 runtime error.

#include "etgossip/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

void print_bound(const etg::ExperimentConfig& cfg, const etg::ExperimentSetup& setup) {
    std::printf("n            %zu\n", cfg.n);
    std::printf("edges        %zu (realized sparsity %.6f)\n", setup.graph.edge_count(),
                setup.graph.realized_sparsity());
    std::printf("delta        %.17g\n", setup.mixing.delta());
    std::printf("eta          %.17g\n", setup.eta);
    if (!setup.theory) {
        std::printf("bound        not available (objective has no certified constants)\n");
        return;
    }
    const auto& c = *setup.theory;
    const auto stab = etg::stability_constants(c);
    std::printf("L            %.17g\n", c.lipschitz);
    std::printf("alpha        %.17g\n", c.alpha);
    std::printf("beta         %.17g\n", c.beta);
    std::printf("f0_gap       %.17g\n", c.f0_gap);
    std::printf("eta_max      %.17g\n", etg::eta_max(c.lipschitz, c.delta, c.n));
    std::printf("Gamma        %.17g\n", stab.gamma);
    std::printf("Delta        %.17g\n", stab.delta_cap);
    if (setup.bound_rhs) {
        std::printf("bound_rhs    %.17g\n", *setup.bound_rhs);
    } else if (!stab.applicable()) {
        std::printf("bound_rhs    inapplicable (Gamma or Delta not positive)\n");
    } else {
        std::printf("bound_rhs    inapplicable (policy is not event-triggered)\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-triggered gossip decentralized SGD simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;

    auto* run = app.add_subcommand("run", "Run an experiment and write the metrics CSV");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--out", out_path, "Metrics CSV path (overrides 'output')");
    run->add_option("--seed", seed, "Base seed (overrides 'seed')");
    run->add_option("--reps", reps, "Monte Carlo repetitions (overrides 'reps')");

    auto* validate = app.add_subcommand("validate", "Check a config file");
    validate->add_option("--config", config_path, "Config file")->required();

    auto* bound = app.add_subcommand("bound", "Print the convergence-bound constants");
    bound->add_option("--config", config_path, "Config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    etg::ExperimentConfig cfg;
    try {
        cfg = etg::load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (reps) {
            if (*reps < 1) throw etg::ConfigError("--reps must be at least 1");
            cfg.reps = *reps;
        }
        if (!out_path.empty()) cfg.output = out_path;
    } catch (const etg::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (*validate) {
            const auto setup = etg::build_setup(cfg);
            std::printf("config ok: n=%zu d=%zu T=%zu reps=%zu edges=%zu eta=%.17g\n", cfg.n, cfg.d,
                        cfg.rounds, cfg.reps, setup.graph.edge_count(), setup.eta);
            return 0;
        }
        if (*bound) {
            print_bound(cfg, etg::build_setup(cfg));
            return 0;
        }

        const auto result = etg::run_experiment(cfg);
        if (cfg.output.empty()) {
            etg::write_csv(std::cout, result.rows);
        } else {
            etg::emit_csv(result.rows, cfg.output);
            etg::emit_summary_csv(result, etg::summary_path_for(cfg.output));
            std::fprintf(stderr, "wrote %s\n", cfg.output.c_str());
        }
        return 0;
    } catch (const etg::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfigError;
    } catch (const etg::TopologyError& e) {
        // An infeasible sparsity or edge count is a configuration problem.
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}
