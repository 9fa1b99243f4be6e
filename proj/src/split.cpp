#include "corrohar/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrohar/rng.hpp"

namespace corrohar {

namespace {

std::size_t test_count(std::size_t n, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw SplitError("test fraction must be in (0, 1)");
    }
    const auto rounded =
        static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction));
    return std::clamp<std::size_t>(rounded, 1, n - 1);
}

}  // namespace

std::pair<std::vector<LabeledWindow>, std::vector<LabeledWindow>> split_train_test(
    std::vector<LabeledWindow> windows, double test_fraction, std::uint64_t seed) {
    const std::size_t n = windows.size();
    if (n < 2) throw SplitError("need at least 2 windows to split");
    const std::size_t n_test = test_count(n, test_fraction);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<char> in_test(n, 0);
    for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = 1;

    std::pair<std::vector<LabeledWindow>, std::vector<LabeledWindow>> out;
    out.first.reserve(n - n_test);
    out.second.reserve(n_test);
    for (std::size_t i = 0; i < n; ++i) {
        (in_test[i] ? out.second : out.first).push_back(std::move(windows[i]));
    }
    return out;
}

std::pair<std::vector<LabeledWindow>, std::vector<LabeledWindow>> split_by_session(
    std::vector<LabeledWindow> windows, double test_fraction, std::uint64_t seed) {
    const std::size_t n = windows.size();
    if (n < 2) throw SplitError("need at least 2 windows to split");
    const std::size_t target = test_count(n, test_fraction);

    std::vector<std::string> session_ids;
    for (const auto& w : windows) {
        if (std::find(session_ids.begin(), session_ids.end(), w.session_id) ==
            session_ids.end()) {
            session_ids.push_back(w.session_id);
        }
    }
    if (session_ids.size() < 2) {
        throw SplitError("need at least 2 sessions for a session-held-out split");
    }

    Rng rng(seed);
    rng.shuffle(session_ids);

    // Fill the test side session by session; always leave at least one
    // session for training.
    std::vector<std::string> test_sessions;
    std::size_t test_size = 0;
    for (const auto& id : session_ids) {
        if (test_size >= target || test_sessions.size() + 1 == session_ids.size()) break;
        test_sessions.push_back(id);
        test_size += static_cast<std::size_t>(
            std::count_if(windows.begin(), windows.end(),
                          [&id](const LabeledWindow& w) { return w.session_id == id; }));
    }

    std::pair<std::vector<LabeledWindow>, std::vector<LabeledWindow>> out;
    for (auto& w : windows) {
        const bool held_out = std::find(test_sessions.begin(), test_sessions.end(),
                                        w.session_id) != test_sessions.end();
        (held_out ? out.second : out.first).push_back(std::move(w));
    }
    return out;
}

}  // namespace corrohar
