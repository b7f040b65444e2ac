#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "latgas/errors.hpp"

namespace latgas {

/// Snapshot schedule plus a sink invoked at each scheduled macroscopic time.
/// Times must be sorted and lie in [0, T] of the simulate call.
template <class ConfigT>
struct Recorder {
    std::vector<double> times;
    std::function<void(std::size_t index, double time, const ConfigT&)> sink;

    void validate(double horizon) const {
        if (!std::is_sorted(times.begin(), times.end()))
            throw Error("Recorder: snapshot times must be sorted");
        if (!times.empty() && (times.front() < 0.0 || times.back() > horizon))
            throw Error("Recorder: snapshot times must lie in [0, T]");
    }
};

/// Convenience recorder that keeps configuration copies in memory.
template <class ConfigT>
struct MemoryRecorder {
    Recorder<ConfigT> recorder;
    std::vector<std::pair<double, ConfigT>> snapshots;

    explicit MemoryRecorder(std::vector<double> times) {
        recorder.times = std::move(times);
        recorder.sink = [this](std::size_t, double t, const ConfigT& c) {
            snapshots.emplace_back(t, c);
        };
    }
};

inline std::vector<double> uniform_schedule(double t_end, int count) {
    std::vector<double> t;
    if (count <= 1) {
        t.push_back(t_end);
        return t;
    }
    t.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        t.push_back(t_end * static_cast<double>(i) / (count - 1));
    return t;
}

} // namespace latgas
