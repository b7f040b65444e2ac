#pragma once

#include <cstdint>

#include "latgas/configuration.hpp"
#include "latgas/ledger.hpp"
#include "latgas/model.hpp"
#include "latgas/rates.hpp"
#include "latgas/recorder.hpp"
#include "latgas/rng.hpp"

namespace latgas {

/// Attempt/event counters of one simulate call. Attempts include candidate
/// events rejected by the exclusion rule; moves/flips count state changes.
struct EngineStats {
    std::uint64_t attempts_sym = 0;
    std::uint64_t attempts_active = 0;
    std::uint64_t attempts_flip = 0;
    std::uint64_t moves_sym = 0;
    std::uint64_t moves_active = 0;
    std::uint64_t flips = 0;
    double final_time = 0.0;

    [[nodiscard]] std::uint64_t attempts() const {
        return attempts_sym + attempts_active + attempts_flip;
    }
};

/// State-changing event as applied by the engine. For exchanges `site`/`to`
/// are the two bond endpoints and species is 0; for jumps the particle moves
/// site -> to; for flips `species` is the type before the flip.
struct AppliedEvent {
    EventKind kind;
    int site;
    int to;
    int axis;
    int step;
    std::int8_t species;
};

/// Hook for per-event accounting (Dynkin drift integrals and the like).
/// advance(dt) is called for every waiting time, including times before
/// rejected attempts; before/after bracket each state change.
class EventObserver {
public:
    virtual ~EventObserver() = default;
    virtual void advance(double dt) = 0;
    virtual void before_event(const AppliedEvent& event) = 0;
    virtual void after_event(const AppliedEvent& event) = 0;
};

/// Exact continuous-time simulation of the MIPS exclusion or AEP dynamics
/// (selected by spec.kind), mutating `cfg` in place up to macroscopic time T.
/// Event times are exponential at the current total rate; candidate events
/// are drawn uniformly within their rate class and thinned by the exclusion
/// constraint, which preserves the exact law.
EngineStats simulate(ExclusionConfig& cfg, const ModelSpec& spec, double T, RngStream& rng,
                     const Recorder<ExclusionConfig>* recorder = nullptr,
                     CurrentLedger* ledger = nullptr, EventObserver* observer = nullptr);

/// Zero-range counterpart.
EngineStats simulate(ZeroRangeConfig& cfg, const ModelSpec& spec, double T, RngStream& rng,
                     const Recorder<ZeroRangeConfig>* recorder = nullptr,
                     CurrentLedger* ledger = nullptr, EventObserver* observer = nullptr);

} // namespace latgas
