#pragma once

#include <filesystem>
#include <vector>

#include "corrohar/types.hpp"

namespace corrohar {

// Gap policy: interpolate up to this many milliseconds, mark anything longer
// as a discontinuity so windowing can skip it.
inline constexpr std::int64_t kDefaultMaxGapMs = 200;

inline constexpr const char* kCsvHeader =
    "timestamp_ms,subject_id,activity,ax,ay,az,gx,gy,gz";

// Reads every .csv file under `dir` (one file per session, canonical header).
// Streams are grouped by subject_id, samples sorted by timestamp; exact
// duplicate rows are dropped, conflicting rows at one timestamp raise
// IntegrityError. Rows with unparseable fields are skipped.
std::vector<Session> load_sessions(const std::filesystem::path& dir,
                                   const LabelDictionary& dict);

// Loads a single session file; session_id is the file stem.
Session load_session_file(const std::filesystem::path& file, const LabelDictionary& dict);

// Writes one <session_id>.csv per session in the canonical layout: streams
// ordered by subject_id, rows by timestamp, floats in shortest round-trip
// form. load_sessions(write_sessions(s)) reproduces s field for field.
void write_sessions(const std::vector<Session>& sessions,
                    const std::filesystem::path& dir);

// Fills gaps of at most max_gap_ms by per-channel linear interpolation on the
// nominal rate grid; larger gaps are recorded in `gaps`. Existing samples are
// never altered.
SubjectStream repair_gaps(const SubjectStream& stream, std::int64_t max_gap_ms);

// True when the median inter-sample gap is within 20% of the nominal period.
// Loading does not enforce this, so sparse or decimated corpora still load;
// the CLI warns on streams that fail it.
bool stream_rate_ok(const SubjectStream& stream);

struct ActivitySummary {
    int sessions = 0;
    int streams = 0;
    double hours = 0.0;
};

struct CorpusSummary {
    std::vector<ActivitySummary> per_activity;  // indexed by activity id
    int total_sessions = 0;
    double total_hours = 0.0;
};

// Per-activity totals in the shape of the corpus statistics table: session
// counts, stream counts and summed session duration in hours.
CorpusSummary summarize(const std::vector<Session>& sessions, const LabelDictionary& dict);

}  // namespace corrohar
