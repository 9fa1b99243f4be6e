#include "corrohar/windows.hpp"

#include <algorithm>

namespace corrohar {

std::vector<LabeledWindow> make_windows(const SubjectStream& stream, const WindowSpec& spec,
                                        const ActivityLabel& label,
                                        const std::string& session_id) {
    spec.validate();

    std::vector<LabeledWindow> windows;
    if (stream.samples.empty()) return windows;

    const std::int64_t length = spec.length_ms();
    const std::int64_t stride = spec.stride_ms();
    const std::int64_t period = stream.period_ms();
    const std::int64_t t_first = stream.samples.front().t_ms;
    const std::int64_t t_last = stream.samples.back().t_ms;

    std::size_t cursor = 0;   // first sample with t >= window start
    std::size_t next_gap = 0; // gaps are sorted; windows move forward

    for (std::int64_t start = 0;; start += stride) {
        const std::int64_t end = start + length;
        // Covered end to end: a sample within one period of each boundary.
        if (end - period > t_last) break;
        if (start < t_first) continue;

        while (next_gap < stream.gaps.size() && stream.gaps[next_gap].end_ms <= start) {
            ++next_gap;
        }
        // Missing data strictly inside (gap.start, gap.end); skip any window
        // that overlaps it.
        if (next_gap < stream.gaps.size() && stream.gaps[next_gap].start_ms < end) continue;

        while (cursor < stream.samples.size() && stream.samples[cursor].t_ms < start) ++cursor;
        std::size_t stop = cursor;
        while (stop < stream.samples.size() && stream.samples[stop].t_ms < end) ++stop;
        const auto count = static_cast<Eigen::Index>(stop - cursor);
        if (count < 2) continue;

        LabeledWindow w;
        w.session_id = session_id;
        w.subject_id = stream.subject_id;
        w.start_ms = start;
        w.end_ms = end;
        w.label = label;
        w.channels.resize(count, kChannelCount);
        for (Eigen::Index i = 0; i < count; ++i) {
            const ImuSample& s = stream.samples[cursor + static_cast<std::size_t>(i)];
            w.channels.row(i) << s.accel[0], s.accel[1], s.accel[2], s.gyro[0], s.gyro[1],
                s.gyro[2];
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

std::vector<LabeledWindow> session_windows(const Session& session, const WindowSpec& spec) {
    std::vector<LabeledWindow> windows;
    for (const auto& stream : session.streams) {
        auto w = make_windows(stream, spec, session.activity, session.session_id);
        windows.insert(windows.end(), std::make_move_iterator(w.begin()),
                       std::make_move_iterator(w.end()));
    }
    return windows;
}

}  // namespace corrohar
