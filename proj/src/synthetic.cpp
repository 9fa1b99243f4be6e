#include "corrohar/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "corrohar/rng.hpp"

namespace corrohar {

namespace {

constexpr double kTwoPi = 6.283185307179586477;
constexpr double kSampleRateHz = 100.0;
constexpr std::int64_t kPeriodMs = 10;

// Fixed shape constants of the archetype model. Class identity is carried by
// the per-activity (amplitude, burst_rate_hz, jitter) triple; everything else
// is common texture.
constexpr double kDriftFreqHz = 0.15;
constexpr double kDriftScale = 0.6;       // drift amplitude as a fraction of A
constexpr double kBurstWidthS = 0.25;     // Gaussian envelope sigma
constexpr double kGyroGain = 40.0;        // deg/s of rotation per g of motion
constexpr double kSubjectAmpSigma = 0.22; // per-subject amplitude spread
constexpr double kSubjectPhaseSigma = 0.5;

struct Burst {
    double center_s;
    double carrier_hz;
    double phase;
    double amplitude;  // already scaled by the subject multiplier
    Eigen::Vector3d accel_dir;
    Eigen::Vector3d gyro_dir;
};

SubjectStream synthesize_stream(const std::string& subject_id, const MotionArchetype& arch,
                                const Eigen::Matrix<double, kChannelCount, 1>& session_phase,
                                double session_length_s, std::uint64_t subject_seed) {
    Rng rng(subject_seed);

    const double amp = arch.amplitude *
                       std::clamp(1.0 + kSubjectAmpSigma * rng.normal(), 0.4, 1.8);
    const double phase_offset = kSubjectPhaseSigma * rng.normal();

    std::vector<Burst> bursts;
    if (arch.burst_rate_hz > 0.0 && amp > 0.0) {
        double t = rng.exponential(arch.burst_rate_hz);
        while (t < session_length_s) {
            Burst b;
            b.center_s = t;
            b.carrier_hz = rng.uniform(1.5, 3.5);
            b.phase = rng.uniform(0.0, kTwoPi);
            b.amplitude = amp * rng.uniform(0.7, 1.3);
            b.accel_dir = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
            b.gyro_dir = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
            bursts.push_back(b);
            t += rng.exponential(arch.burst_rate_hz);
        }
    }

    SubjectStream stream;
    stream.subject_id = subject_id;
    stream.nominal_rate_hz = kSampleRateHz;

    const auto n = static_cast<std::int64_t>(std::llround(session_length_s * kSampleRateHz));
    stream.samples.reserve(static_cast<std::size_t>(n));

    std::size_t first_active = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / kSampleRateHz;

        ImuSample s;
        s.t_ms = i * kPeriodMs;
        s.accel = Eigen::Vector3d(0.0, 0.0, 1.0);  // gravity on the vertical axis

        for (int c = 0; c < kChannelCount; ++c) {
            const double gain = c < 3 ? 1.0 : kGyroGain;
            const double drift = amp * kDriftScale *
                                 std::sin(kTwoPi * kDriftFreqHz * t + session_phase[c] +
                                          phase_offset);
            const double noise = arch.jitter * rng.normal();
            if (c < 3) {
                s.accel[c] += drift + noise;
            } else {
                s.gyro[c - 3] += gain * (drift + noise);
            }
        }

        // Bursts are sparse; only the envelope within 4 sigma matters.
        while (first_active < bursts.size() &&
               bursts[first_active].center_s + 4.0 * kBurstWidthS < t) {
            ++first_active;
        }
        for (std::size_t bi = first_active; bi < bursts.size(); ++bi) {
            const Burst& b = bursts[bi];
            const double dt = t - b.center_s;
            if (dt < -4.0 * kBurstWidthS) break;
            const double envelope =
                b.amplitude * std::exp(-0.5 * (dt / kBurstWidthS) * (dt / kBurstWidthS));
            const double wave = envelope * std::sin(kTwoPi * b.carrier_hz * dt + b.phase);
            s.accel += wave * b.accel_dir;
            s.gyro += kGyroGain * wave * b.gyro_dir;
        }

        stream.samples.push_back(s);
    }
    return stream;
}

void validate(const SyntheticConfig& cfg) {
    if (cfg.labels.size() < 1) throw ConfigError("synthetic config needs at least one label");
    if (static_cast<int>(cfg.archetypes.size()) != cfg.labels.size()) {
        throw ConfigError("synthetic config needs one archetype per label");
    }
    if (cfg.devices_per_session < 1) throw ConfigError("devices_per_session must be >= 1");
    if (cfg.sessions_per_activity < 1) throw ConfigError("sessions_per_activity must be >= 1");
    if (cfg.session_length_s <= 0) throw ConfigError("session_length_s must be positive");
}

}  // namespace

SyntheticConfig default_synthetic_config() {
    SyntheticConfig cfg;
    cfg.archetypes = {
        {0.34, 0.70, 0.19},  // eating: broad gestures, frequent bursts
        {0.10, 0.12, 0.19},  // lecture: mostly still
        {0.17, 0.28, 0.19},  // meeting: occasional gestures
        {0.25, 0.48, 0.19},  // office: steady typing-scale motion
    };
    return cfg;
}

std::vector<Session> generate_synthetic(const SyntheticConfig& cfg) {
    validate(cfg);

    std::vector<Session> sessions;
    sessions.reserve(static_cast<std::size_t>(cfg.labels.size() * cfg.sessions_per_activity));

    std::uint64_t session_counter = 0;
    for (int a = 0; a < cfg.labels.size(); ++a) {
        for (int k = 0; k < cfg.sessions_per_activity; ++k, ++session_counter) {
            const std::uint64_t session_seed =
                derive_seed(cfg.seed, "synthetic-session", session_counter);

            // Session-shared drift phase per channel: group members move in
            // loose unison, which is the correlation corroboration leans on.
            Rng shared(derive_seed(session_seed, "shared"));
            Eigen::Matrix<double, kChannelCount, 1> session_phase;
            for (int c = 0; c < kChannelCount; ++c) session_phase[c] = shared.uniform(0.0, kTwoPi);

            Session session;
            session.activity = cfg.labels.label(a);
            {
                std::ostringstream id;
                id << session.activity.name << "_s";
                if (k < 10) id << '0';
                id << k;
                session.session_id = id.str();
            }

            for (int d = 0; d < cfg.devices_per_session; ++d) {
                session.streams.push_back(synthesize_stream(
                    "u" + std::to_string(d), cfg.archetypes[static_cast<std::size_t>(a)],
                    session_phase, cfg.session_length_s,
                    derive_seed(session_seed, "subject", static_cast<std::uint64_t>(d))));
            }
            sessions.push_back(std::move(session));
        }
    }
    return sessions;
}

SyntheticConfig parse_synthetic_config(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }

    SyntheticConfig cfg = default_synthetic_config();
    try {
        if (doc.contains("labels")) {
            cfg.labels = LabelDictionary(doc["labels"].get<std::vector<std::string>>());
            cfg.archetypes.assign(static_cast<std::size_t>(cfg.labels.size()),
                                  MotionArchetype{});
            if (cfg.labels == gws_labels()) cfg.archetypes = default_synthetic_config().archetypes;
        }
        if (doc.contains("archetypes")) {
            for (const auto& [name, spec] : doc["archetypes"].items()) {
                const int id = cfg.labels.require(name);
                auto& arch = cfg.archetypes[static_cast<std::size_t>(id)];
                if (spec.contains("amplitude")) arch.amplitude = spec["amplitude"].get<double>();
                if (spec.contains("burst_rate_hz")) {
                    arch.burst_rate_hz = spec["burst_rate_hz"].get<double>();
                }
                if (spec.contains("jitter")) arch.jitter = spec["jitter"].get<double>();
            }
        }
        if (doc.contains("devices_per_session")) {
            cfg.devices_per_session = doc["devices_per_session"].get<int>();
        }
        if (doc.contains("sessions_per_activity")) {
            cfg.sessions_per_activity = doc["sessions_per_activity"].get<int>();
        }
        if (doc.contains("session_length_s")) {
            cfg.session_length_s = doc["session_length_s"].get<double>();
        }
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid synthetic config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

SyntheticConfig load_synthetic_config(const std::filesystem::path& json_file) {
    std::ifstream in(json_file);
    if (!in) throw IoError("cannot open " + json_file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_synthetic_config(buf.str());
}

}  // namespace corrohar
