#include "corrohar/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace corrohar {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

bool parse_int64(std::string_view s, std::int64_t& out) {
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

// Shortest round-trip decimal form; locale-independent.
void append_double(std::string& out, double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

void check_header(const std::string& header, const std::filesystem::path& file) {
    if (header == kCsvHeader) return;
    const auto expected = split_fields(kCsvHeader);
    const auto got = split_fields(header);
    for (const auto& col : expected) {
        if (std::find(got.begin(), got.end(), col) == got.end()) {
            throw FormatError(file.string() + ": malformed header, missing column '" +
                              std::string(col) + "'");
        }
    }
    throw FormatError(file.string() + ": malformed header '" + header + "'");
}

bool same_sample(const ImuSample& a, const ImuSample& b) {
    return a.t_ms == b.t_ms && a.accel == b.accel && a.gyro == b.gyro;
}

}  // namespace

Session load_session_file(const std::filesystem::path& file, const LabelDictionary& dict) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());

    std::string line;
    if (!std::getline(in, line)) throw FormatError(file.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    check_header(line, file);

    Session session;
    session.session_id = file.stem().string();
    session.activity.id = -1;

    std::map<std::string, std::vector<ImuSample>> by_subject;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 9) continue;  // rejected row

        ImuSample s;
        double v[6];
        bool ok = parse_int64(fields[0], s.t_ms) && s.t_ms >= 0;
        for (int i = 0; i < 6 && ok; ++i) ok = parse_double(fields[3 + i], v[i]);
        if (!ok) continue;  // rejected row
        s.accel = Eigen::Vector3d(v[0], v[1], v[2]);
        s.gyro = Eigen::Vector3d(v[3], v[4], v[5]);

        const std::string activity(fields[2]);
        const int label_id = dict.id(activity);
        if (label_id < 0) {
            throw DictionaryError(file.string() + ": unknown activity name: " + activity);
        }
        if (session.activity.id < 0) {
            session.activity = dict.label(label_id);
        } else if (session.activity.id != label_id) {
            throw FormatError(file.string() + ": mixed activities '" + session.activity.name +
                              "' and '" + activity + "' in one session file");
        }
        by_subject[std::string(fields[1])].push_back(s);
    }
    if (by_subject.empty()) throw FormatError(file.string() + ": no valid rows");

    for (auto& [subject_id, samples] : by_subject) {
        std::stable_sort(samples.begin(), samples.end(),
                         [](const ImuSample& a, const ImuSample& b) { return a.t_ms < b.t_ms; });
        // Drop exact duplicates; conflicting values at one timestamp are not
        // recoverable by sorting.
        std::vector<ImuSample> deduped;
        deduped.reserve(samples.size());
        for (const auto& s : samples) {
            if (!deduped.empty() && deduped.back().t_ms == s.t_ms) {
                if (same_sample(deduped.back(), s)) continue;
                throw IntegrityError(file.string() + ": subject " + subject_id +
                                     " has conflicting rows at t=" + std::to_string(s.t_ms));
            }
            deduped.push_back(s);
        }
        SubjectStream stream;
        stream.subject_id = subject_id;
        stream.samples = std::move(deduped);
        session.streams.push_back(std::move(stream));
    }
    return session;
}

std::vector<Session> load_sessions(const std::filesystem::path& dir,
                                   const LabelDictionary& dict) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<Session> sessions;
    sessions.reserve(files.size());
    for (const auto& file : files) sessions.push_back(load_session_file(file, dict));
    return sessions;
}

void write_sessions(const std::vector<Session>& sessions, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& session : sessions) {
        std::string out;
        out += kCsvHeader;
        out += '\n';

        std::vector<const SubjectStream*> streams;
        for (const auto& s : session.streams) streams.push_back(&s);
        std::sort(streams.begin(), streams.end(), [](const auto* a, const auto* b) {
            return a->subject_id < b->subject_id;
        });

        for (const auto* stream : streams) {
            for (const auto& s : stream->samples) {
                out += std::to_string(s.t_ms);
                out += ',';
                out += stream->subject_id;
                out += ',';
                out += session.activity.name;
                for (int c = 0; c < kChannelCount; ++c) {
                    out += ',';
                    append_double(out, s.channel(c));
                }
                out += '\n';
            }
        }

        const auto path = dir / (session.session_id + ".csv");
        std::ofstream file(path, std::ios::binary);
        if (!file) throw IoError("cannot write " + path.string());
        file << out;
    }
}

SubjectStream repair_gaps(const SubjectStream& stream, std::int64_t max_gap_ms) {
    SubjectStream out;
    out.subject_id = stream.subject_id;
    out.nominal_rate_hz = stream.nominal_rate_hz;
    out.samples.reserve(stream.samples.size());

    const std::int64_t period = stream.period_ms();
    for (std::size_t i = 0; i < stream.samples.size(); ++i) {
        const ImuSample& cur = stream.samples[i];
        if (!out.samples.empty()) {
            const ImuSample prev = out.samples.back();  // copy: push_back below reallocates
            const std::int64_t dt = cur.t_ms - prev.t_ms;
            if (dt > max_gap_ms) {
                out.gaps.push_back({prev.t_ms, cur.t_ms});
            } else if (dt > period) {
                // Fill the gap on the nominal grid, linear per channel.
                for (std::int64_t t = prev.t_ms + period; t < cur.t_ms; t += period) {
                    const double f = static_cast<double>(t - prev.t_ms) / static_cast<double>(dt);
                    ImuSample filled;
                    filled.t_ms = t;
                    filled.accel = prev.accel + f * (cur.accel - prev.accel);
                    filled.gyro = prev.gyro + f * (cur.gyro - prev.gyro);
                    out.samples.push_back(filled);
                }
            }
        }
        out.samples.push_back(cur);
    }
    return out;
}

bool stream_rate_ok(const SubjectStream& stream) {
    if (stream.samples.size() < 2) return true;
    std::vector<std::int64_t> gaps;
    gaps.reserve(stream.samples.size() - 1);
    for (std::size_t i = 1; i < stream.samples.size(); ++i) {
        gaps.push_back(stream.samples[i].t_ms - stream.samples[i - 1].t_ms);
    }
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2),
                     gaps.end());
    const auto median = static_cast<double>(gaps[gaps.size() / 2]);
    const double period = 1000.0 / stream.nominal_rate_hz;
    return std::abs(median - period) <= 0.2 * period;
}

CorpusSummary summarize(const std::vector<Session>& sessions, const LabelDictionary& dict) {
    CorpusSummary summary;
    summary.per_activity.resize(static_cast<std::size_t>(dict.size()));
    for (const auto& session : sessions) {
        std::int64_t longest_ms = 0;
        for (const auto& stream : session.streams) {
            longest_ms = std::max(longest_ms, stream.duration_ms());
        }
        auto& a = summary.per_activity[static_cast<std::size_t>(session.activity.id)];
        a.sessions += 1;
        a.streams += static_cast<int>(session.streams.size());
        a.hours += static_cast<double>(longest_ms) / 3.6e6;
        summary.total_sessions += 1;
        summary.total_hours += static_cast<double>(longest_ms) / 3.6e6;
    }
    return summary;
}

}  // namespace corrohar
