#pragma once

#include <filesystem>
#include <vector>

#include "corrohar/simulator.hpp"

namespace corrohar {

// JSON-lines trace: one decision per line with fields session_id, device_id,
// tick_ms, truth, standalone, corroborated, standalone_probs,
// corroborated_probs, n_neighbors_used. Labels are written as names.
void write_traces(const std::vector<SessionTrace>& traces, const LabelDictionary& dict,
                  const std::filesystem::path& path);

// Rebuilds traces from a JSON-lines file. Sessions and devices keep first-
// appearance order; decisions are sorted by tick. Label names are resolved
// against `dict`.
std::vector<SessionTrace> read_traces(const std::filesystem::path& path,
                                      const LabelDictionary& dict);

// The label names observed in a trace file (truth and predictions), in
// sorted order — a fallback dictionary when no model file is at hand.
LabelDictionary trace_labels(const std::filesystem::path& path);

}  // namespace corrohar
