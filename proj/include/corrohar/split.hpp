#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "corrohar/windows.hpp"

namespace corrohar {

enum class SplitMode { window, session };

// Random partition over windows (the reference protocol): deterministic in
// seed, disjoint and exhaustive, test size rounded from the fraction and
// clamped so both sides are non-empty. SplitError on fewer than 2 windows.
std::pair<std::vector<LabeledWindow>, std::vector<LabeledWindow>> split_train_test(
    std::vector<LabeledWindow> windows, double test_fraction, std::uint64_t seed);

// Held-out-session variant: whole sessions are assigned to the test side
// until it holds roughly test_fraction of the windows, so no session
// contributes to both partitions. SplitError on fewer than 2 sessions.
std::pair<std::vector<LabeledWindow>, std::vector<LabeledWindow>> split_by_session(
    std::vector<LabeledWindow> windows, double test_fraction, std::uint64_t seed);

}  // namespace corrohar
