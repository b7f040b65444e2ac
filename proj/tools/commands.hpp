#pragma once

#include "run_config.hpp"

namespace latgas::cli {

int cmd_simulate(const RunConfig& cfg);
int cmd_hydro(const RunConfig& cfg);
int cmd_spde(const RunConfig& cfg);
int cmd_stability(const RunConfig& cfg, bool sweep, bool binodal);
int cmd_selfdiffusion(const RunConfig& cfg);
int cmd_compare(const std::string& micro_dir, const std::string& hydro_dir,
                const std::string& outdir);
int cmd_sweep(const RunConfig& cfg);

/// Exit codes of the batch front door.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_runtime_error = 3;

} // namespace latgas::cli
