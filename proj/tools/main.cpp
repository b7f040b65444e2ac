#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "latgas/errors.hpp"
#include "latgas/version.hpp"

namespace {

using latgas::cli::ConfigError;
using latgas::cli::RunConfig;

void print_error_json(const std::string& message, const std::string& field, int line) {
    std::string f = field;
    for (auto& c : f)
        if (c == '"') c = '\'';
    std::string m = message;
    for (auto& c : m)
        if (c == '"') c = '\'';
    std::fprintf(stderr, "{\"error\": \"%s\", \"field\": \"%s\", \"line\": %d}\n", m.c_str(),
                 f.c_str(), line);
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                      std::int64_t seed_override, const std::string& outdir_override) {
    RunConfig cfg = path.empty() ? RunConfig::from_string("") : RunConfig::from_file(path);
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError{"--set expects key=value, got '" + ov + "'", ov, -1};
        cfg.set_override(ov.substr(0, eq), ov.substr(eq + 1));
    }
    if (seed_override >= 0) cfg.set_override("seed", std::to_string(seed_override));
    if (!outdir_override.empty()) cfg.set_override("outdir", outdir_override);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"latgas: active lattice gas simulation and numerics toolkit"};
    app.set_version_flag("--version", latgas::version_string);
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::int64_t seed = -1;
    std::string outdir;

    auto add_common = [&](CLI::App* sub, bool config_required = true) {
        sub->add_option("--config", config_path, "run configuration file")
            ->required(config_required);
        sub->add_option("--set", overrides, "override a config field (key=value, repeatable)");
        sub->add_option("--seed", seed, "master seed override");
        sub->add_option("--outdir", outdir, "output directory override");
    };

    auto* simulate = app.add_subcommand("simulate", "run the kinetic Monte Carlo engine");
    add_common(simulate);
    auto* hydro = app.add_subcommand("hydro", "integrate the hydrodynamic PDEs");
    add_common(hydro);
    auto* spde = app.add_subcommand("spde", "integrate the fluctuating-hydrodynamics SPDEs");
    add_common(spde);
    auto* stability = app.add_subcommand("stability", "linear stability, spinodals, binodals");
    bool sweep_flag = false;
    bool binodal_flag = false;
    stability->add_flag("--sweep", sweep_flag, "emit the phase-diagram data layers");
    stability->add_flag("--binodal", binodal_flag, "extract coexisting densities from the PDE");
    add_common(stability);
    auto* selfdiff = app.add_subcommand("selfdiffusion", "tagged-particle self-diffusion table");
    add_common(selfdiff);
    auto* sweep = app.add_subcommand("sweep", "phase-diagram sweep (alias of stability --sweep)");
    add_common(sweep);
    auto* compare = app.add_subcommand("compare", "micro vs hydro field comparison");
    std::string micro_dir, hydro_dir, compare_out;
    compare->add_option("--micro", micro_dir, "simulate artifact directory")->required();
    compare->add_option("--hydro", hydro_dir, "hydro artifact directory")->required();
    compare->add_option("--outdir", compare_out, "report directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (compare->parsed())
            return latgas::cli::cmd_compare(micro_dir, hydro_dir, compare_out);
        const RunConfig cfg = load_config(config_path, overrides, seed, outdir);
        if (simulate->parsed()) return latgas::cli::cmd_simulate(cfg);
        if (hydro->parsed()) return latgas::cli::cmd_hydro(cfg);
        if (spde->parsed()) return latgas::cli::cmd_spde(cfg);
        if (stability->parsed())
            return latgas::cli::cmd_stability(cfg, sweep_flag, binodal_flag);
        if (selfdiff->parsed()) return latgas::cli::cmd_selfdiffusion(cfg);
        if (sweep->parsed()) return latgas::cli::cmd_sweep(cfg);
    } catch (const ConfigError& e) {
        print_error_json(e.message, e.field, e.line);
        return latgas::cli::exit_config_error;
    } catch (const std::exception& e) {
        print_error_json(e.what(), "", -1);
        return latgas::cli::exit_runtime_error;
    }
    return latgas::cli::exit_config_error;
}
