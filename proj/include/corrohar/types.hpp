#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "corrohar/errors.hpp"

namespace corrohar {

struct ActivityLabel {
    int id = -1;
    std::string name;

    bool operator==(const ActivityLabel&) const = default;
};

// The configured activity set. Ids are contiguous positions 0..K-1 in the
// order the names were given; names must be unique.
class LabelDictionary {
public:
    LabelDictionary() = default;

    explicit LabelDictionary(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            for (std::size_t j = i + 1; j < names_.size(); ++j) {
                if (names_[i] == names_[j]) {
                    throw ConfigError("duplicate activity name: " + names_[i]);
                }
            }
        }
    }

    int size() const { return static_cast<int>(names_.size()); }

    const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }

    // -1 when the name is not in the dictionary.
    int id(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i] == name) return static_cast<int>(i);
        }
        return -1;
    }

    int require(const std::string& name) const {
        const int i = id(name);
        if (i < 0) throw DictionaryError("unknown activity name: " + name);
        return i;
    }

    ActivityLabel label(int id) const { return {id, name(id)}; }

    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const LabelDictionary&) const = default;

private:
    std::vector<std::string> names_;
};

// The four activities of the group work & study corpus.
inline LabelDictionary gws_labels() {
    return LabelDictionary({"eating", "lecture", "meeting", "office"});
}

// One timestamped 6-axis reading: acceleration in g, angular rate in deg/s.
struct ImuSample {
    std::int64_t t_ms = 0;
    Eigen::Vector3d accel = Eigen::Vector3d::Zero();
    Eigen::Vector3d gyro = Eigen::Vector3d::Zero();

    // Channel order everywhere: ax, ay, az, gx, gy, gz.
    double channel(int c) const { return c < 3 ? accel[c] : gyro[c - 3]; }
};

inline constexpr int kChannelCount = 6;
inline constexpr const char* kChannelNames[kChannelCount] = {"ax", "ay", "az",
                                                             "gx", "gy", "gz"};

// Missing-data region left by repair_gaps: samples exist at both endpoints,
// nothing in the open interval between them.
struct Discontinuity {
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;

    bool operator==(const Discontinuity&) const = default;
};

struct SubjectStream {
    std::string subject_id;
    std::vector<ImuSample> samples;
    double nominal_rate_hz = 100.0;
    std::vector<Discontinuity> gaps;

    std::int64_t period_ms() const {
        return static_cast<std::int64_t>(std::llround(1000.0 / nominal_rate_hz));
    }

    // Extent covered by the stream, counting one period for the last sample.
    std::int64_t duration_ms() const {
        if (samples.empty()) return 0;
        return samples.back().t_ms - samples.front().t_ms + period_ms();
    }
};

// One recording of a group all engaged in the same activity.
struct Session {
    std::string session_id;
    ActivityLabel activity;
    std::vector<SubjectStream> streams;
};

}  // namespace corrohar
