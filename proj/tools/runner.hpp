#pragma once

#include <filesystem>
#include <string>

namespace torus::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_internal = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_data = 3;

struct RunOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = "out";
    unsigned long long seed = 0;
    int threads = 1;
    bool seed_overridden = false;
};

// Dispatches a scenario config to one of the batch commands; writes CSV/JSON
// artifacts plus a run manifest into the output directory. Returns a process
// exit code and reports errors on stderr.
int run_scenario(const RunOptions& options);

// Parse the config text directly (used by tests); writes into out_dir.
int run_scenario_text(const std::string& config_text, const RunOptions& options);

}  // namespace torus::cli
