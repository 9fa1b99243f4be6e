#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "corrohar/types.hpp"

namespace corrohar {

// Motion archetype for one activity. Streams are built from a slow posture
// drift plus Poisson-timed motion bursts riding on white sensor noise; the
// drift phase is shared across a session's subjects so that group members
// look alike in class without being identical.
struct MotionArchetype {
    double amplitude = 0.2;      // overall motion scale, g
    double burst_rate_hz = 0.3;  // Poisson rate of motion bursts
    double jitter = 0.15;        // per-subject white-noise sigma, g

    bool operator==(const MotionArchetype&) const = default;
};

struct SyntheticConfig {
    LabelDictionary labels = gws_labels();
    std::vector<MotionArchetype> archetypes;  // one per label, dictionary order
    int devices_per_session = 4;
    int sessions_per_activity = 3;
    double session_length_s = 240.0;
    std::uint64_t seed = 0;
};

// Archetypes tuned so a forest trained on one generated corpus classifies a
// fresh one in the mid-accuracy band where corroboration has room to help.
SyntheticConfig default_synthetic_config();

// Deterministic in cfg (seed included). Sessions are emitted per activity in
// dictionary order; every stream runs at 100 Hz with 6 channels.
std::vector<Session> generate_synthetic(const SyntheticConfig& cfg);

// JSON document mirroring SyntheticConfig field names. Archetypes are keyed
// by activity name; absent fields keep their defaults.
SyntheticConfig load_synthetic_config(const std::filesystem::path& json_file);
SyntheticConfig parse_synthetic_config(const std::string& json_text);

}  // namespace corrohar
