#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "latgas/io.hpp"
#include "latgas/rng.hpp"

using namespace latgas;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("latgas_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LATGAS_CLI_PATH) + " " + args + " 2>stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            out[fs::relative(e.path(), root).string()] = slurp(e.path());
    return out;
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
}

} // namespace

TEST_CASE("snapshot round trips preserve configurations exactly") {
    const auto dir = temp_dir("roundtrip");
    RngStream rng(42);

    Lattice lat(1, 200);
    ExclusionConfig ex(lat);
    for (auto& v : ex.state)
        v = static_cast<std::int8_t>(rng.uniform() < 0.3 ? 1 : (rng.uniform() < 0.4 ? -1 : 0));
    io::Header h;
    h.model = "mips";
    h.side = 200;
    h.dimension = 1;
    h.seed = 42;
    h.time = 0.25;
    io::write_exclusion_snapshot(dir / "snap", ex, h);
    io::Header back;
    const auto ex2 = read_exclusion_snapshot(dir / "snap", &back);
    CHECK(ex2.state == ex.state);
    CHECK(back.model == "mips");
    CHECK(back.time == doctest::Approx(0.25));

    ZeroRangeConfig zr(lat);
    for (std::size_t i = 0; i < zr.n_plus.size(); ++i) {
        zr.n_plus[i] = static_cast<std::uint32_t>(rng.poisson(1.5));
        zr.n_minus[i] = static_cast<std::uint32_t>(rng.poisson(0.5));
    }
    io::write_zero_range_snapshot(dir / "zsnap", zr, h);
    const auto zr2 = io::read_zero_range_snapshot(dir / "zsnap");
    CHECK(zr2.n_plus == zr.n_plus);
    CHECK(zr2.n_minus == zr.n_minus);
}

TEST_CASE("coarse field and hydro state round trips") {
    const auto dir = temp_dir("fields");
    RngStream rng(1);

    CoarseField f;
    f.dimension = 1;
    f.source_side = 64;
    f.block_radius = 5;
    f.stride = 1;
    f.time = 0.5;
    for (int i = 0; i < 64; ++i) {
        f.plus.push_back(rng.uniform());
        f.minus.push_back(rng.uniform());
    }
    io::Header h;
    h.side = 64;
    h.dimension = 1;
    h.time = 0.5;
    io::write_coarse_field(dir / "coarse", f, h);
    const auto f2 = io::read_coarse_field(dir / "coarse");
    CHECK(f2.block_radius == 5);
    for (std::size_t i = 0; i < f.plus.size(); ++i) {
        CHECK(f2.plus[i] == f.plus[i]); // %.17g round trip is exact
        CHECK(f2.minus[i] == f.minus[i]);
    }

    hydro::HydroState s = hydro::uniform_state(hydro::System::Mips, 32, 0.4, 0.1, 2.0);
    for (auto& v : s.rho) v += 0.01 * rng.normal();
    s.time = 0.125;
    io::Header hh;
    hh.dimension = 1;
    hh.time = s.time;
    io::write_hydro_state(dir / "state", s, hh);
    const auto s2 = io::read_hydro_state(dir / "state");
    CHECK(s2.grid == 32);
    CHECK(s2.domain_length == 2.0);
    for (std::size_t i = 0; i < s.rho.size(); ++i) CHECK(s2.rho[i] == s.rho[i]);
}

TEST_CASE("manifest round trip") {
    const auto dir = temp_dir("manifest");
    io::Manifest m;
    m.config["model"] = "mips";
    m.config["lambda"] = "1.5";
    m.seeds = {7, 8, 9};
    io::write_manifest(dir / "manifest.json", m);
    const auto m2 = io::read_manifest(dir / "manifest.json");
    CHECK(m2.config.at("model") == "mips");
    CHECK(m2.config.at("lambda") == "1.5");
    CHECK(m2.seeds == std::vector<std::uint64_t>{7, 8, 9});
    CHECK(!m2.version.empty());
}

TEST_CASE("cli: determinism, validation, ensemble artifacts") {
    const auto dir = temp_dir("cli");
    const auto cwd = fs::current_path();
    fs::current_path(dir);

    write_file("mips.run", R"(model = mips
dimension = 1
n = 96
D = 1.0
lambda = 1.0
gamma = 1.0
t_end = 0.01
snapshots = 2
profile_plus = sine:0.3:0.1:1
profile_minus = const:0.3
ensemble = 3
seed = 7
jobs = 2
outdir = runA
)");

    CHECK(run_cli("simulate --config mips.run") == 0);
    CHECK(run_cli("simulate --config mips.run --set outdir=runB") == 0);
    auto a = tree_bytes("runA");
    auto b = tree_bytes("runB");
    // the manifests record different outdir values; all artifacts identical
    a.erase("manifest.json");
    b.erase("manifest.json");
    CHECK(a == b);
    CHECK(a.size() > 10);
    CHECK(fs::exists("runA/seed0002/coarse_0001.csv"));

    // missing required field: exit code 2 and a machine-parsable error
    write_file("broken.run", "model = mips\nn = 64\ndimension = 1\ngamma = 1.0\n"
                             "t_end = 0.01\nprofile_plus = const:0.2\n"
                             "profile_minus = const:0.2\noutdir = x\n");
    CHECK(run_cli("simulate --config broken.run") == 2);
    const std::string err = slurp("stderr.txt");
    CHECK(err.find("lambda") != std::string::npos);
    CHECK(err.find("\"error\"") != std::string::npos);

    // unknown field is rejected
    write_file("typo.run", R"(model = mips
dimension = 1
n = 64
D = 1.0
lambda = 1.0
gamma = 1.0
t_end = 0.01
profile_plus = const:0.2
profile_minus = const:0.2
outdir = y
lamda = 2.0
)");
    CHECK(run_cli("simulate --config typo.run") == 2);

    fs::current_path(cwd);
}

TEST_CASE("cli: compare flags parameter mismatches") {
    const auto dir = temp_dir("compare");
    const auto cwd = fs::current_path();
    fs::current_path(dir);

    write_file("micro.run", R"(model = mips
dimension = 1
n = 96
D = 1.0
lambda = 1.0
gamma = 1.0
t_end = 0.01
snapshots = 2
profile_plus = const:0.3
profile_minus = const:0.3
ensemble = 2
seed = 3
outdir = micro
write_snapshots = false
)");
    write_file("pde.run", R"(hydro_model = mips
grid = 48
D = 1.0
lambda = 1.0
gamma = 1.0
t_end = 0.01
snapshots = 2
profile_plus = const:0.3
profile_minus = const:0.3
outdir = pde
)");
    write_file("pde_bad.run", R"(hydro_model = mips
grid = 48
D = 1.0
lambda = 2.5
gamma = 1.0
t_end = 0.01
snapshots = 2
profile_plus = const:0.3
profile_minus = const:0.3
outdir = pde_bad
)");
    CHECK(run_cli("simulate --config micro.run") == 0);
    CHECK(run_cli("hydro --config pde.run") == 0);
    CHECK(run_cli("hydro --config pde_bad.run") == 0);
    CHECK(run_cli("compare --micro micro --hydro pde --outdir cmp") == 0);
    CHECK(fs::exists("cmp/compare.csv"));
    CHECK(fs::exists("cmp/compare.json"));
    CHECK(run_cli("compare --micro micro --hydro pde_bad --outdir cmp_bad") == 3);
    CHECK(slurp("stderr.txt").find("lambda") != std::string::npos);

    fs::current_path(cwd);
}

TEST_CASE("cli: spde headers record the noise mode") {
    const auto dir = temp_dir("spde");
    const auto cwd = fs::current_path();
    fs::current_path(dir);
    write_file("spde.run", R"(spde_kind = linear
grid = 32
D = 1.0
lambda = 0.0
gamma = 1.0
rho0 = 0.5
t_end = 0.001
snapshots = 2
noise_mode = conservative
seed = 5
outdir = fluct
)");
    CHECK(run_cli("spde --config spde.run") == 0);
    const std::string header = slurp("fluct/fluct_0001.json");
    CHECK(header.find("conservative") != std::string::npos);
    fs::current_path(cwd);
}
