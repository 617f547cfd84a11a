#include <cstdlib>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"torus-pdo: toroidal pseudo-differential operator workbench"};
    torus::cli::RunOptions options;
    std::string config, out = "out";
    unsigned long long seed = 0;
    int threads = 0;

    app.add_option("--config", config, "scenario config (JSON)")->required();
    app.add_option("--out", out, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "random seed recorded in the manifest");
    app.add_option("--threads", threads, "worker threads (TORUS_PDO_THREADS fallback)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return torus::cli::exit_usage;
    }

    options.config_path = config;
    options.out_dir = out;
    options.seed = seed;
    options.seed_overridden = seed_opt->count() > 0;
    if (threads > 0) {
        options.threads = threads;
    } else if (const char* env = std::getenv("TORUS_PDO_THREADS")) {
        options.threads = std::max(1, std::atoi(env));
    }
    return torus::cli::run_scenario(options);
}
