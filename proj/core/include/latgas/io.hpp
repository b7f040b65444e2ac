#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "latgas/coarse.hpp"
#include "latgas/configuration.hpp"
#include "latgas/hydro.hpp"
#include "latgas/ledger.hpp"

namespace latgas::io {

/// Metadata attached to every artifact file as a sibling .json.
struct Header {
    std::string model;
    int side = 0;
    int dimension = 1;
    std::uint64_t seed = 0;
    double time = 0.0;
    std::map<std::string, std::string> extra;
};

void ensure_directory(const std::filesystem::path& dir);

/// Configuration snapshots: CSV body (site,state) or (site,n_plus,n_minus)
/// plus the JSON header at <base>.json.
void write_exclusion_snapshot(const std::filesystem::path& base, const ExclusionConfig& cfg,
                              const Header& header);
void write_zero_range_snapshot(const std::filesystem::path& base, const ZeroRangeConfig& cfg,
                               const Header& header);
ExclusionConfig read_exclusion_snapshot(const std::filesystem::path& base, Header* header = nullptr);
ZeroRangeConfig read_zero_range_snapshot(const std::filesystem::path& base, Header* header = nullptr);

/// Ledger dump: <base>.csv with (site,axis,sym_plus,asym_plus,sym_minus,asym_minus)
/// and <base>_flips.csv with (site,flips_up,flips_down).
void write_ledger(const std::filesystem::path& base, const CurrentLedger& ledger,
                  const Lattice& lattice);

/// Coarse fields: (u1[,u2],rho_plus,rho_minus) plus JSON header.
void write_coarse_field(const std::filesystem::path& base, const CoarseField& field,
                        const Header& header);
CoarseField read_coarse_field(const std::filesystem::path& base, Header* header = nullptr);

/// Hydrodynamic fields: (u1[,u2],rho,m) plus JSON header carrying grid and
/// domain metadata.
void write_hydro_state(const std::filesystem::path& base, const hydro::HydroState& state,
                       const Header& header);
hydro::HydroState read_hydro_state(const std::filesystem::path& base, Header* header = nullptr);

/// Run manifest: configuration key-values, derived seeds and code version.
/// Deterministic byte-for-byte for fixed inputs (no timestamps).
struct Manifest {
    std::map<std::string, std::string> config;
    std::vector<std::uint64_t> seeds;
    std::string version;
};
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

/// Generic JSON record writer for small reports (flat string->value maps;
/// values written verbatim, caller formats numbers).
void write_json_record(const std::filesystem::path& path,
                       const std::map<std::string, std::string>& numbers,
                       const std::map<std::string, std::string>& strings);

std::string format_double(double v);

} // namespace latgas::io
