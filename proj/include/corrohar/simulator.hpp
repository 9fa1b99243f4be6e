#pragma once

#include <cstdint>
#include <vector>

#include "corrohar/corroboration.hpp"
#include "corrohar/dataset.hpp"
#include "corrohar/windows.hpp"

namespace corrohar {

// Message loss and delay between session members. The defaults are the
// perfect network the prototype assumes.
struct NetworkModel {
    double drop_probability = 0.0;
    std::int64_t latency_ms = 0;
    std::uint64_t seed = 0;
};

struct SimConfig {
    WindowSpec window;
    std::int64_t tick_period_ms = 5000;  // must equal the window stride
    NetworkModel network;
    AggregationPolicy aggregation;
    std::int64_t staleness_ms = 5000;
    std::int64_t max_gap_ms = kDefaultMaxGapMs;
    std::uint64_t seed = 0;

    void validate() const;
};

struct DeviceTrace {
    std::string device_id;
    std::vector<Decision> decisions;  // sorted by tick
};

struct SessionTrace {
    std::string session_id;
    ActivityLabel truth;
    std::vector<DeviceTrace> devices;

    std::size_t decision_count() const {
        std::size_t n = 0;
        for (const auto& d : devices) n += d.decisions.size();
        return n;
    }
};

// Replays one session as synchronous rounds on the shared tick grid
// (window_length, +stride, ...). Per tick: every device with a fresh window
// infers, broadcasts through the loss model, then aggregates — so with zero
// latency a decision uses same-tick neighbor vectors. Deterministic in the
// config seeds; loss draws are counter-derived per (tick, sender, receiver).
SessionTrace run_session(const Session& session, const BackboneModel& model,
                         const SimConfig& cfg);

// Independent per-session simulation; traces in input order, per-session
// randomness derived from the session id so reordering inputs only permutes
// outputs. ConfigError when the model's label set does not cover a session.
std::vector<SessionTrace> run_experiment(const std::vector<Session>& sessions,
                                         const BackboneModel& model, const SimConfig& cfg);

}  // namespace corrohar
