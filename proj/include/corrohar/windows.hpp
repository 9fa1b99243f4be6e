#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "corrohar/types.hpp"

namespace corrohar {

struct WindowSpec {
    double length_s = 10.0;
    double stride_s = 5.0;

    std::int64_t length_ms() const { return static_cast<std::int64_t>(length_s * 1000.0); }
    std::int64_t stride_ms() const { return static_cast<std::int64_t>(stride_s * 1000.0); }

    void validate() const {
        if (length_s <= 0 || stride_s <= 0) throw ConfigError("window lengths must be positive");
        if (stride_s > length_s) throw ConfigError("window stride must not exceed window length");
    }
};

// Samples of one window, rows = time, cols = (ax, ay, az, gx, gy, gz).
using ChannelMatrix = Eigen::Matrix<double, Eigen::Dynamic, kChannelCount>;

struct LabeledWindow {
    std::string session_id;
    std::string subject_id;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    ActivityLabel label;
    ChannelMatrix channels;
};

// Slices a gap-repaired stream into windows on the fixed grid 0, stride,
// 2*stride, ... A window is emitted only when the stream covers it end to end
// and no discontinuity falls inside it. Streams shorter than one window give
// an empty list.
std::vector<LabeledWindow> make_windows(const SubjectStream& stream, const WindowSpec& spec,
                                        const ActivityLabel& label,
                                        const std::string& session_id = {});

// make_windows over every stream of a session.
std::vector<LabeledWindow> session_windows(const Session& session, const WindowSpec& spec);

}  // namespace corrohar
