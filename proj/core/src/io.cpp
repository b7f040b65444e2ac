#include "latgas/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "latgas/errors.hpp"
#include "latgas/version.hpp"

namespace latgas::io {
namespace {

using nlohmann::json;

json header_to_json(const Header& h) {
    json j;
    j["model"] = h.model;
    j["n"] = h.side;
    j["dimension"] = h.dimension;
    j["seed"] = h.seed;
    j["time"] = h.time;
    for (const auto& [k, v] : h.extra) j[k] = v;
    return j;
}

Header header_from_json(const json& j) {
    Header h;
    h.model = j.value("model", "");
    h.side = j.value("n", 0);
    h.dimension = j.value("dimension", 1);
    h.seed = j.value("seed", std::uint64_t{0});
    h.time = j.value("time", 0.0);
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k == "model" || k == "n" || k == "dimension" || k == "seed" || k == "time") continue;
        if (it->is_string()) h.extra[k] = it->get<std::string>();
    }
    return h;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io: cannot open " + path.string() + " for writing");
    out << body;
    if (!out) throw Error("io: short write to " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_header(const std::filesystem::path& base, const Header& h) {
    write_file(base.string() + ".json", header_to_json(h).dump(2) + "\n");
}

Header read_header(const std::filesystem::path& base) {
    return header_from_json(json::parse(read_file(base.string() + ".json")));
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("io: cannot create directory " + dir.string() + ": " + ec.message());
}

void write_exclusion_snapshot(const std::filesystem::path& base, const ExclusionConfig& cfg,
                              const Header& header) {
    std::ostringstream os;
    os << "site,state\n";
    for (int s = 0; s < cfg.lattice.sites(); ++s)
        os << s << ',' << static_cast<int>(cfg.state[static_cast<std::size_t>(s)]) << '\n';
    write_file(base.string() + ".csv", os.str());
    write_header(base, header);
}

void write_zero_range_snapshot(const std::filesystem::path& base, const ZeroRangeConfig& cfg,
                               const Header& header) {
    std::ostringstream os;
    os << "site,n_plus,n_minus\n";
    for (int s = 0; s < cfg.lattice.sites(); ++s)
        os << s << ',' << cfg.n_plus[static_cast<std::size_t>(s)] << ','
           << cfg.n_minus[static_cast<std::size_t>(s)] << '\n';
    write_file(base.string() + ".csv", os.str());
    write_header(base, header);
}

ExclusionConfig read_exclusion_snapshot(const std::filesystem::path& base, Header* header) {
    const Header h = read_header(base);
    if (header) *header = h;
    Lattice lat(h.dimension, h.side);
    ExclusionConfig cfg(lat);
    std::istringstream in(read_file(base.string() + ".csv"));
    std::string line;
    std::getline(in, line); // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int site = 0, state = 0;
        if (std::sscanf(line.c_str(), "%d,%d", &site, &state) != 2)
            throw Error("io: malformed snapshot row: " + line);
        cfg.state.at(static_cast<std::size_t>(site)) = static_cast<std::int8_t>(state);
    }
    return cfg;
}

ZeroRangeConfig read_zero_range_snapshot(const std::filesystem::path& base, Header* header) {
    const Header h = read_header(base);
    if (header) *header = h;
    Lattice lat(h.dimension, h.side);
    ZeroRangeConfig cfg(lat);
    std::istringstream in(read_file(base.string() + ".csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int site = 0;
        unsigned np = 0, nm = 0;
        if (std::sscanf(line.c_str(), "%d,%u,%u", &site, &np, &nm) != 3)
            throw Error("io: malformed snapshot row: " + line);
        cfg.n_plus.at(static_cast<std::size_t>(site)) = np;
        cfg.n_minus.at(static_cast<std::size_t>(site)) = nm;
    }
    return cfg;
}

void write_ledger(const std::filesystem::path& base, const CurrentLedger& ledger,
                  const Lattice& lattice) {
    std::ostringstream os;
    os << "site,axis,sym_plus,asym_plus,sym_minus,asym_minus\n";
    for (int s = 0; s < lattice.sites(); ++s) {
        for (int a = 0; a < lattice.dimension(); ++a) {
            const auto e = static_cast<std::size_t>(lattice.edge_slot(s, a));
            os << s << ',' << a << ',' << ledger.sym_plus[e] << ',' << ledger.asym_plus[e]
               << ',' << ledger.sym_minus[e] << ',' << ledger.asym_minus[e] << '\n';
        }
    }
    write_file(base.string() + ".csv", os.str());
    std::ostringstream fs;
    fs << "site,flips_up,flips_down\n";
    for (int s = 0; s < lattice.sites(); ++s)
        fs << s << ',' << ledger.flips_up[static_cast<std::size_t>(s)] << ','
           << ledger.flips_down[static_cast<std::size_t>(s)] << '\n';
    write_file(base.string() + "_flips.csv", fs.str());
}

void write_coarse_field(const std::filesystem::path& base, const CoarseField& field,
                        const Header& header) {
    std::ostringstream os;
    os << (field.dimension == 1 ? "u1,rho_plus,rho_minus\n" : "u1,u2,rho_plus,rho_minus\n");
    for (std::size_t c = 0; c < field.centers(); ++c) {
        os << format_double(field.center_coord(c, 0));
        if (field.dimension == 2) os << ',' << format_double(field.center_coord(c, 1));
        os << ',' << format_double(field.plus[c]) << ',' << format_double(field.minus[c])
           << '\n';
    }
    write_file(base.string() + ".csv", os.str());
    Header h = header;
    h.extra["block_radius"] = std::to_string(field.block_radius);
    h.extra["stride"] = std::to_string(field.stride);
    write_header(base, h);
}

CoarseField read_coarse_field(const std::filesystem::path& base, Header* header) {
    const Header h = read_header(base);
    if (header) *header = h;
    CoarseField f;
    f.dimension = h.dimension;
    f.source_side = h.side;
    f.time = h.time;
    f.block_radius = h.extra.count("block_radius") ? std::stoi(h.extra.at("block_radius")) : 0;
    f.stride = h.extra.count("stride") ? std::stoi(h.extra.at("stride")) : 1;
    std::istringstream in(read_file(base.string() + ".csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double u1 = 0, u2 = 0, rp = 0, rm = 0;
        if (f.dimension == 1) {
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &u1, &rp, &rm) != 3)
                throw Error("io: malformed coarse row: " + line);
        } else {
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &u1, &u2, &rp, &rm) != 4)
                throw Error("io: malformed coarse row: " + line);
        }
        f.plus.push_back(rp);
        f.minus.push_back(rm);
    }
    return f;
}

void write_hydro_state(const std::filesystem::path& base, const hydro::HydroState& state,
                       const Header& header) {
    std::ostringstream os;
    os << (state.dimension == 1 ? "u1,rho,m\n" : "u1,u2,rho,m\n");
    const int n = state.grid;
    for (std::size_t c = 0; c < state.cells(); ++c) {
        const auto x = static_cast<int>(c) % n;
        const auto y = static_cast<int>(c) / n;
        os << format_double(x * state.du());
        if (state.dimension == 2) os << ',' << format_double(y * state.du());
        os << ',' << format_double(state.rho[c]) << ',' << format_double(state.m[c]) << '\n';
    }
    write_file(base.string() + ".csv", os.str());
    Header h = header;
    h.extra["grid"] = std::to_string(state.grid);
    h.extra["domain_length"] = format_double(state.domain_length);
    write_header(base, h);
}

hydro::HydroState read_hydro_state(const std::filesystem::path& base, Header* header) {
    const Header h = read_header(base);
    if (header) *header = h;
    hydro::HydroState s;
    s.dimension = h.dimension;
    s.time = h.time;
    s.grid = h.extra.count("grid") ? std::stoi(h.extra.at("grid")) : 0;
    s.domain_length =
        h.extra.count("domain_length") ? std::stod(h.extra.at("domain_length")) : 1.0;
    std::istringstream in(read_file(base.string() + ".csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double u1 = 0, u2 = 0, rho = 0, m = 0;
        if (s.dimension == 1) {
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &u1, &rho, &m) != 3)
                throw Error("io: malformed hydro row: " + line);
        } else {
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &u1, &u2, &rho, &m) != 4)
                throw Error("io: malformed hydro row: " + line);
        }
        s.rho.push_back(rho);
        s.m.push_back(m);
    }
    if (s.grid == 0) s.grid = static_cast<int>(s.dimension == 1 ? s.rho.size() : 0);
    return s;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    json j;
    j["version"] = manifest.version.empty() ? version_string : manifest.version;
    j["config"] = json::object();
    for (const auto& [k, v] : manifest.config) j["config"][k] = v;
    j["seeds"] = manifest.seeds;
    write_file(path, j.dump(2) + "\n");
}

Manifest read_manifest(const std::filesystem::path& path) {
    const json j = json::parse(read_file(path));
    Manifest m;
    m.version = j.value("version", "");
    if (j.contains("config"))
        for (auto it = j["config"].begin(); it != j["config"].end(); ++it)
            m.config[it.key()] = it->get<std::string>();
    if (j.contains("seeds"))
        for (const auto& s : j["seeds"]) m.seeds.push_back(s.get<std::uint64_t>());
    return m;
}

void write_json_record(const std::filesystem::path& path,
                       const std::map<std::string, std::string>& numbers,
                       const std::map<std::string, std::string>& strings) {
    json j;
    for (const auto& [k, v] : numbers) j[k] = json::parse(v); // numbers formatted upstream
    for (const auto& [k, v] : strings) j[k] = v;
    write_file(path, j.dump(2) + "\n");
}

} // namespace latgas::io
