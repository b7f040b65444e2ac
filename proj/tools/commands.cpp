#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latgas/coarse.hpp"
#include "latgas/engine.hpp"
#include "latgas/io.hpp"
#include "latgas/nongradient.hpp"
#include "latgas/parallel.hpp"
#include "latgas/spde.hpp"
#include "latgas/stability.hpp"
#include "latgas/version.hpp"

namespace latgas::cli {
namespace fs = std::filesystem;
namespace {

std::string zeropad(int v, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*d", width, v);
    return buf;
}

fs::path resolve_outdir(const RunConfig& cfg) {
    fs::path out(cfg.get_string("outdir", "out"));
    if (out.is_relative()) {
        if (const char* root = std::getenv("LATGAS_OUT")) out = fs::path(root) / out;
    }
    io::ensure_directory(out);
    return out;
}

Profile parse_profile(const RunConfig& cfg, const std::string& key) {
    const std::string desc = cfg.get_string(key);
    std::vector<std::string> parts;
    std::istringstream ss(desc);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) cfg.invalid(key, "empty profile descriptor");
    auto num = [&](std::size_t i) {
        char* end = nullptr;
        const double v = std::strtod(parts[i].c_str(), &end);
        if (end == parts[i].c_str() || *end != '\0')
            cfg.invalid(key, "bad number '" + parts[i] + "' in profile descriptor");
        return v;
    };
    const std::string& kind = parts[0];
    if (kind == "const" && parts.size() == 2) return Profile::constant(num(1));
    if (kind == "sine" && parts.size() == 4)
        return Profile::sine(num(1), num(2), static_cast<int>(num(3)));
    if (kind == "step" && parts.size() == 3) return Profile::step(num(1), num(2));
    if (kind == "slab" && parts.size() == 2) return Profile::slab(num(1));
    if (kind == "file" && parts.size() == 2) {
        std::ifstream in(parts[1]);
        if (!in) cfg.invalid(key, "cannot open profile table '" + parts[1] + "'");
        std::vector<double> values;
        double v = 0.0;
        while (in >> v) values.push_back(v);
        if (values.empty()) cfg.invalid(key, "empty profile table '" + parts[1] + "'");
        return Profile::tabulated(std::move(values));
    }
    cfg.invalid(key,
                "unknown profile descriptor '" + desc +
                    "' (use const:c, sine:base:amp:k, step:left:right, slab:c, file:path)");
}

SpeciesProfiles parse_profiles(const RunConfig& cfg) {
    return {parse_profile(cfg, "profile_plus"), parse_profile(cfg, "profile_minus")};
}

ModelKind parse_model_kind(const RunConfig& cfg) {
    const std::string m = cfg.get_string("model");
    if (m == "mips") return ModelKind::MipsExclusion;
    if (m == "zr-flock") return ModelKind::ZrFlock;
    if (m == "aep") return ModelKind::Aep;
    cfg.invalid("model", "expected mips, zr-flock or aep");
}

ModelSpec parse_model_spec(const RunConfig& cfg) {
    ModelSpec spec;
    spec.kind = parse_model_kind(cfg);
    spec.dimension = static_cast<int>(cfg.get_int("dimension", 1));
    spec.side = static_cast<int>(cfg.get_int("n"));
    spec.D = cfg.get_double("D", 1.0);
    spec.lambda = cfg.get_double("lambda");
    spec.gamma = spec.kind == ModelKind::ZrFlock ? 0.0 : cfg.get_double("gamma");
    spec.beta = spec.kind == ModelKind::ZrFlock ? cfg.get_double("beta") : 0.0;
    try {
        spec.validate();
    } catch (const Error& e) {
        throw ConfigError{e.what(), "model", -1};
    }
    return spec;
}

std::vector<double> parse_snapshot_times(const RunConfig& cfg, double t_end) {
    if (cfg.has("snapshot_times")) return cfg.get_double_list("snapshot_times");
    const auto count = static_cast<int>(cfg.get_int("snapshots", 2));
    return uniform_schedule(t_end, count);
}

io::Manifest manifest_for(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds) {
    io::Manifest m;
    m.config = cfg.entries();
    m.seeds = seeds;
    m.version = version_string;
    return m;
}

hydro::System parse_hydro_system(const RunConfig& cfg, const std::string& key) {
    const std::string m = cfg.get_string(key);
    if (m == "mips") return hydro::System::Mips;
    if (m == "peclet2d") return hydro::System::Peclet2d;
    if (m == "flock") return hydro::System::Flock;
    cfg.invalid(key, "expected mips, peclet2d or flock");
}

hydro::PdeConfig parse_pde_config(const RunConfig& cfg, hydro::System system) {
    hydro::PdeConfig pde;
    pde.system = system;
    pde.scheme = cfg.get_string("scheme", "central") == "upwind"
                     ? hydro::Scheme::UpwindAdvection
                     : hydro::Scheme::Central;
    pde.cfl_safety = cfg.get_double("cfl_safety", 0.4);
    if (system == hydro::System::Peclet2d) {
        pde.peclet = cfg.get_double("pe");
    } else {
        pde.D = cfg.get_double("D", 1.0);
        pde.lambda = cfg.get_double("lambda");
        if (system == hydro::System::Mips) pde.gamma = cfg.get_double("gamma");
        else pde.beta = cfg.get_double("beta");
    }
    return pde;
}

void fail_on_unused(const RunConfig& cfg) {
    const auto unused = cfg.unused_keys();
    if (!unused.empty())
        throw ConfigError{"unknown field '" + unused.front() + "'", unused.front(), -1};
}

} // namespace

int cmd_simulate(const RunConfig& cfg) {
    const ModelSpec spec = parse_model_spec(cfg);
    const SpeciesProfiles profiles = parse_profiles(cfg);
    const double t_end = cfg.get_double("t_end");
    const auto times = parse_snapshot_times(cfg, t_end);
    const auto ensemble = static_cast<int>(cfg.get_int("ensemble", 1));
    const auto master_seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    const auto jobs = static_cast<int>(cfg.get_int("jobs", 0));
    int block = static_cast<int>(cfg.get_int("block_radius", 0));
    if (block <= 0) block = std::min(default_block_radius(spec.side), spec.side / 4);
    const fs::path out = resolve_outdir(cfg);
    const bool write_snapshots = cfg.get_bool("write_snapshots", true);
    fail_on_unused(cfg);

    const Lattice lat(spec.dimension, spec.side);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(ensemble));
    for (int i = 0; i < ensemble; ++i) seeds[static_cast<std::size_t>(i)] = master_seed;

    parallel_for(jobs, ensemble, [&](int i) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(i));
        const fs::path dir = out / ("seed" + zeropad(i, 4));
        io::ensure_directory(dir);
        io::Header header;
        header.model = to_string(spec.kind);
        header.side = spec.side;
        header.dimension = spec.dimension;
        header.seed = master_seed;
        header.extra["stream"] = std::to_string(i);
        header.extra["D"] = io::format_double(spec.D);
        header.extra["lambda"] = io::format_double(spec.lambda);
        header.extra["gamma"] = io::format_double(spec.gamma);
        header.extra["beta"] = io::format_double(spec.beta);

        CurrentLedger ledger(lat);
        if (spec.kind == ModelKind::ZrFlock) {
            auto state = init_zero_range_poisson(profiles, lat, rng);
            Recorder<ZeroRangeConfig> rec;
            rec.times = times;
            rec.sink = [&](std::size_t idx, double t, const ZeroRangeConfig& c) {
                io::Header h = header;
                h.time = t;
                if (write_snapshots)
                    io::write_zero_range_snapshot(
                        dir / ("snap_" + zeropad(static_cast<int>(idx), 4)), c, h);
                io::write_coarse_field(dir / ("coarse_" + zeropad(static_cast<int>(idx), 4)),
                                       coarse_grain(c, block, t), h);
            };
            simulate(state, spec, t_end, rng, &rec, &ledger);
        } else {
            auto state = init_exclusion(profiles, lat, rng);
            Recorder<ExclusionConfig> rec;
            rec.times = times;
            rec.sink = [&](std::size_t idx, double t, const ExclusionConfig& c) {
                io::Header h = header;
                h.time = t;
                if (write_snapshots)
                    io::write_exclusion_snapshot(
                        dir / ("snap_" + zeropad(static_cast<int>(idx), 4)), c, h);
                io::write_coarse_field(dir / ("coarse_" + zeropad(static_cast<int>(idx), 4)),
                                       coarse_grain(c, block, t), h);
            };
            simulate(state, spec, t_end, rng, &rec, &ledger);
        }
        io::write_ledger(dir / "ledger", ledger, lat);
    });

    io::write_manifest(out / "manifest.json", manifest_for(cfg, seeds));
    return exit_ok;
}

int cmd_hydro(const RunConfig& cfg) {
    const auto system = parse_hydro_system(cfg, "hydro_model");
    const auto pde = parse_pde_config(cfg, system);
    const auto grid = static_cast<int>(cfg.get_int("grid"));
    const double domain = cfg.get_double("domain_length", 1.0);
    const double t_end = cfg.get_double("t_end");
    const auto times = parse_snapshot_times(cfg, t_end);
    const fs::path out = resolve_outdir(cfg);

    hydro::HydroState initial;
    if (cfg.has("profile_plus")) {
        initial = hydro::state_from_profiles(system, parse_profiles(cfg), grid, domain);
    } else {
        initial = hydro::uniform_state(system, grid, cfg.get_double("rho0"),
                                       cfg.get_double("m0", 0.0), domain);
    }
    fail_on_unused(cfg);

    const auto snaps = hydro::solve(initial, pde, t_end, times);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        io::Header h;
        h.model = cfg.get_string("hydro_model");
        h.side = grid;
        h.dimension = snaps[i].dimension;
        h.time = snaps[i].time;
        h.extra["D"] = io::format_double(pde.D);
        h.extra["lambda"] = io::format_double(pde.lambda);
        h.extra["gamma"] = io::format_double(pde.gamma);
        h.extra["beta"] = io::format_double(pde.beta);
        h.extra["pe"] = io::format_double(pde.peclet);
        io::write_hydro_state(out / ("fields_" + zeropad(static_cast<int>(i), 4)), snaps[i], h);
    }
    io::write_manifest(out / "manifest.json", manifest_for(cfg, {}));
    return exit_ok;
}

int cmd_spde(const RunConfig& cfg) {
    const std::string kind = cfg.get_string("spde_kind", "linear");
    spde::SpdeConfig sc;
    sc.D = cfg.get_double("D", 1.0);
    sc.lambda = cfg.get_double("lambda");
    sc.gamma = cfg.get_double("gamma");
    sc.cfl_safety = cfg.get_double("cfl_safety", 0.1);
    const std::string mode = cfg.get_string("noise_mode", "conservative");
    if (mode != "conservative" && mode != "additive")
        cfg.invalid("noise_mode", "expected conservative or additive");
    sc.transport_noise =
        mode == "conservative" ? spde::NoiseMode::Conservative : spde::NoiseMode::Additive;
    const auto grid = static_cast<int>(cfg.get_int("grid"));
    const double t_end = cfg.get_double("t_end");
    const auto times = parse_snapshot_times(cfg, t_end);
    const double rho0 = cfg.get_double("rho0");
    const double m0 = cfg.get_double("m0", 0.0);
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    const fs::path out = resolve_outdir(cfg);
    RngStream rng(seed);

    io::Header h;
    h.side = grid;
    h.dimension = 1;
    h.seed = seed;
    h.extra["noise_mode"] = mode;
    h.extra["D"] = io::format_double(sc.D);
    h.extra["lambda"] = io::format_double(sc.lambda);
    h.extra["gamma"] = io::format_double(sc.gamma);

    if (kind == "linear") {
        fail_on_unused(cfg);
        auto state = spde::flat_fluct_state(grid, rho0, m0);
        std::size_t si = 0;
        auto emit = [&] {
            while (si < times.size() && times[si] <= state.time + 1e-12) {
                hydro::HydroState view;
                view.dimension = 1;
                view.grid = grid;
                view.time = state.time;
                view.rho = state.r;
                view.m = state.m;
                io::Header hh = h;
                hh.model = "spde-linear";
                hh.time = state.time;
                io::write_hydro_state(out / ("fluct_" + zeropad(static_cast<int>(si), 4)), view,
                                      hh);
                ++si;
            }
        };
        emit();
        while (state.time < t_end - 1e-12) {
            spde::step_fluct(state, sc, rng);
            emit();
        }
    } else if (kind == "finite-n") {
        const double n_sites = cfg.get_double("micro_n");
        fail_on_unused(cfg);
        auto state = hydro::uniform_state(hydro::System::Mips, grid, rho0, m0);
        std::uint64_t violations = 0;
        std::size_t si = 0;
        auto emit = [&] {
            while (si < times.size() && times[si] <= state.time + 1e-12) {
                io::Header hh = h;
                hh.model = "spde-finite-n";
                hh.time = state.time;
                hh.extra["micro_n"] = io::format_double(n_sites);
                hh.extra["violations"] = std::to_string(violations);
                io::write_hydro_state(out / ("fields_" + zeropad(static_cast<int>(si), 4)),
                                      state, hh);
                ++si;
            }
        };
        emit();
        const double dt = sc.effective_dt(state.du());
        while (state.time < t_end - 1e-12) {
            spde::SpdeConfig step_cfg = sc;
            step_cfg.dt = std::min(dt, t_end - state.time);
            violations += spde::step_fluctuating_hydro(state, n_sites, step_cfg, rng);
            emit();
        }
    } else {
        cfg.invalid("spde_kind", "expected linear or finite-n");
    }
    io::write_manifest(out / "manifest.json", manifest_for(cfg, {seed}));
    return exit_ok;
}

namespace {

std::vector<double> grid_values(const RunConfig& cfg, const std::string& prefix) {
    const double lo = cfg.get_double(prefix + "_min");
    const double hi = cfg.get_double(prefix + "_max");
    const auto count = static_cast<int>(cfg.get_int(prefix + "_count"));
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return out;
}

void write_phase_points(const fs::path& path, const std::vector<stability::PhasePoint>& pts,
                        const std::string& control_name) {
    std::ostringstream os;
    os << "rho0," << control_name << ",verdict,max_growth,q_star,note\n";
    for (const auto& p : pts) {
        os << io::format_double(p.rho0) << ',' << io::format_double(p.control) << ','
           << (p.unstable ? "UNSTABLE" : "STABLE") << ',' << io::format_double(p.max_growth)
           << ',' << io::format_double(p.q_star) << ',' << p.note << '\n';
    }
    std::ofstream f(path);
    f << os.str();
}

} // namespace

int cmd_stability(const RunConfig& cfg, bool sweep, bool binodal) {
    const std::string model = cfg.get_string("stability_model", cfg.get_string("model", "mips"));
    const fs::path out = resolve_outdir(cfg);
    const auto jobs = static_cast<int>(cfg.get_int("jobs", 0));

    if (sweep) {
        if (model == "mips") {
            const auto rhos = grid_values(cfg, "rho");
            const auto pes = grid_values(cfg, "pe");
            fail_on_unused(cfg);
            write_phase_points(out / "phase_points.csv",
                               stability::phase_diagram_sweep_mips(rhos, pes, jobs), "pe");
            std::ostringstream os;
            os << "rho0,pe_c_numeric,pe_c_closed_form\n";
            for (double r : rhos) {
                const auto closed = stability::spinodal_mips_closed_form(r);
                const auto numeric = stability::spinodal_mips(r);
                os << io::format_double(r) << ','
                   << (numeric ? io::format_double(*numeric) : "nan") << ','
                   << (closed ? io::format_double(*closed) : "nan") << '\n';
            }
            std::ofstream f(out / "spinodal_mips.csv");
            f << os.str();
        } else if (model == "flock") {
            const auto rhos = grid_values(cfg, "rho");
            const auto temps = grid_values(cfg, "T");
            const double D = cfg.get_double("D", 1.0);
            const double lambda = cfg.get_double("lambda", 1.0);
            fail_on_unused(cfg);
            write_phase_points(out / "phase_points.csv",
                               stability::phase_diagram_sweep_flock(rhos, temps, D, lambda, jobs),
                               "T");
            const auto pts = stability::spinodal_flock(temps, D, lambda);
            std::ostringstream os;
            os << "T,rho_gas_spinodal,rho_liquid_spinodal\n";
            for (const auto& p : pts)
                os << io::format_double(p.T) << ',' << io::format_double(p.rho_gas_spinodal)
                   << ','
                   << (p.rho_liquid_spinodal ? io::format_double(*p.rho_liquid_spinodal) : "nan")
                   << '\n';
            std::ofstream f(out / "spinodal_flock.csv");
            f << os.str();
        } else {
            cfg.invalid("stability_model", "expected mips or flock");
        }
        io::write_manifest(out / "manifest.json", manifest_for(cfg, {}));
        return exit_ok;
    }

    if (binodal) {
        stability::BinodalOptions opts;
        opts.grid = static_cast<int>(cfg.get_int("grid", opts.grid));
        opts.domain_length = cfg.get_double("domain_length", opts.domain_length);
        opts.t_max = cfg.get_double("t_max", opts.t_max);
        opts.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 20240801));
        const auto rho_bars = cfg.get_double_list("rho_bar");
        stability::BinodalModel bm = stability::BinodalModel::MipsPeclet;
        if (model == "mips") {
            opts.peclet = cfg.get_double("pe");
        } else if (model == "flock") {
            bm = stability::BinodalModel::Flock;
            opts.D = cfg.get_double("D", 1.0);
            opts.lambda = cfg.get_double("lambda", 1.0);
            opts.beta = cfg.get_double("beta");
        } else {
            cfg.invalid("stability_model", "expected mips or flock");
        }
        fail_on_unused(cfg);
        std::ostringstream os;
        os << "rho_bar,status,rho_gas,rho_liq,band_speed,m_gas,m_liq,time_used\n";
        for (double rb : rho_bars) {
            const auto res = stability::binodal_from_pde(bm, rb, opts);
            const char* status = res.status == stability::BinodalStatus::Ok
                                     ? "ok"
                                     : (res.status == stability::BinodalStatus::NoPhaseSeparation
                                            ? "no_phase_separation"
                                            : "not_converged");
            os << io::format_double(rb) << ',' << status << ',' << io::format_double(res.rho_gas)
               << ',' << io::format_double(res.rho_liq) << ','
               << io::format_double(res.band_speed) << ',' << io::format_double(res.m_gas) << ','
               << io::format_double(res.m_liq) << ',' << io::format_double(res.time_used)
               << '\n';
        }
        std::ofstream f(out / "binodal.csv");
        f << os.str();
        io::write_manifest(out / "manifest.json", manifest_for(cfg, {}));
        return exit_ok;
    }

    throw ConfigError{"stability needs --sweep or --binodal", "", -1};
}

int cmd_selfdiffusion(const RunConfig& cfg) {
    const auto rhos = cfg.get_double_list("rho_list");
    const auto dimension = static_cast<int>(cfg.get_int("dimension", 2));
    const auto side = static_cast<int>(cfg.get_int("L", 64));
    const double budget = cfg.get_double("time_budget", 200.0);
    const auto runs = static_cast<int>(cfg.get_int("runs", 32));
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    const auto jobs = static_cast<int>(cfg.get_int("jobs", 0));
    const fs::path out = resolve_outdir(cfg);
    fail_on_unused(cfg);

    std::ostringstream os;
    os << "rho,ds,stderr,msd_exponent,fit_window_ok,L,budget\n";
    for (double rho : rhos) {
        const auto est =
            nongrad::estimate_self_diffusion(rho, dimension, side, budget, runs, seed, jobs);
        os << io::format_double(rho) << ',' << io::format_double(est.ds) << ','
           << io::format_double(est.stderr_) << ',' << io::format_double(est.msd_exponent)
           << ',' << (est.fit_window_ok ? 1 : 0) << ',' << side << ','
           << io::format_double(budget) << '\n';
    }
    std::ofstream f(out / "ds.csv");
    f << os.str();
    io::write_manifest(out / "manifest.json", manifest_for(cfg, {seed}));
    return exit_ok;
}

int cmd_compare(const std::string& micro_dir, const std::string& hydro_dir,
                const std::string& outdir) {
    const auto micro_manifest = io::read_manifest(fs::path(micro_dir) / "manifest.json");
    const auto hydro_manifest = io::read_manifest(fs::path(hydro_dir) / "manifest.json");
    for (const char* key : {"D", "lambda", "gamma", "beta"}) {
        const auto mi = micro_manifest.config.find(key);
        const auto hy = hydro_manifest.config.find(key);
        if (mi != micro_manifest.config.end() && hy != hydro_manifest.config.end() &&
            std::strtod(mi->second.c_str(), nullptr) !=
                std::strtod(hy->second.c_str(), nullptr))
            throw ParameterMismatch(std::string("compare: parameter '") + key +
                                    "' differs between the micro and hydro runs");
    }

    // collect snapshot indices from the hydro side
    std::vector<fs::path> hydro_fields;
    for (int i = 0;; ++i) {
        const fs::path base = fs::path(hydro_dir) / ("fields_" + zeropad(i, 4));
        if (!fs::exists(base.string() + ".csv")) break;
        hydro_fields.push_back(base);
    }
    if (hydro_fields.empty()) throw Error("compare: no fields_*.csv in " + hydro_dir);

    // ensemble of micro seeds
    std::vector<fs::path> seed_dirs;
    for (int i = 0;; ++i) {
        const fs::path dir = fs::path(micro_dir) / ("seed" + zeropad(i, 4));
        if (!fs::exists(dir)) break;
        seed_dirs.push_back(dir);
    }
    if (seed_dirs.empty()) throw Error("compare: no seed directories in " + micro_dir);

    io::ensure_directory(outdir);
    std::ostringstream os;
    os << "snapshot,time,l1_rho_mean_field,l1_m_mean_field,l1_rho_per_seed,l1_m_per_seed\n";
    double last_mean_rho = 0.0;
    double last_mean_m = 0.0;
    for (std::size_t si = 0; si < hydro_fields.size(); ++si) {
        io::Header hh;
        const auto pde = io::read_hydro_state(hydro_fields[si], &hh);
        std::vector<double> mean_rho, mean_m, coords;
        double per_seed_rho = 0.0, per_seed_m = 0.0;
        double t = pde.time;
        for (const auto& dir : seed_dirs) {
            io::Header ch;
            const auto coarse =
                io::read_coarse_field(dir / ("coarse_" + zeropad(static_cast<int>(si), 4)), &ch);
            if (std::abs(ch.time - pde.time) > 1e-9)
                throw ParameterMismatch("compare: snapshot times differ");
            if (mean_rho.empty()) {
                mean_rho.assign(coarse.centers(), 0.0);
                mean_m.assign(coarse.centers(), 0.0);
                coords.resize(coarse.centers());
                for (std::size_t c = 0; c < coarse.centers(); ++c)
                    coords[c] = coarse.center_coord(c, 0);
            }
            double arho = 0.0, am = 0.0;
            for (std::size_t c = 0; c < coarse.centers(); ++c) {
                const double rho = coarse.plus[c] + coarse.minus[c];
                const double m = coarse.plus[c] - coarse.minus[c];
                mean_rho[c] += rho;
                mean_m[c] += m;
                arho += std::abs(rho - hydro::rho_at(pde, coords[c]));
                am += std::abs(m - hydro::m_at(pde, coords[c]));
            }
            per_seed_rho += arho / static_cast<double>(coarse.centers());
            per_seed_m += am / static_cast<double>(coarse.centers());
        }
        const auto n_seeds = static_cast<double>(seed_dirs.size());
        per_seed_rho /= n_seeds;
        per_seed_m /= n_seeds;
        double l1_rho = 0.0, l1_m = 0.0;
        for (std::size_t c = 0; c < mean_rho.size(); ++c) {
            l1_rho += std::abs(mean_rho[c] / n_seeds - hydro::rho_at(pde, coords[c]));
            l1_m += std::abs(mean_m[c] / n_seeds - hydro::m_at(pde, coords[c]));
        }
        l1_rho /= static_cast<double>(mean_rho.size());
        l1_m /= static_cast<double>(mean_m.size());
        last_mean_rho = l1_rho;
        last_mean_m = l1_m;
        os << si << ',' << io::format_double(t) << ',' << io::format_double(l1_rho) << ','
           << io::format_double(l1_m) << ',' << io::format_double(per_seed_rho) << ','
           << io::format_double(per_seed_m) << '\n';
    }
    std::ofstream f(fs::path(outdir) / "compare.csv");
    f << os.str();
    io::write_json_record(fs::path(outdir) / "compare.json",
                          {{"final_l1_rho", io::format_double(last_mean_rho)},
                           {"final_l1_m", io::format_double(last_mean_m)},
                           {"snapshots", std::to_string(hydro_fields.size())},
                           {"seeds", std::to_string(seed_dirs.size())}},
                          {{"micro", micro_dir}, {"hydro", hydro_dir}});
    return exit_ok;
}

int cmd_sweep(const RunConfig& cfg) { return cmd_stability(cfg, true, false); }

} // namespace latgas::cli
