#include <doctest.h>

#include <algorithm>
#include <corrohar/evaluation.hpp>
#include <corrohar/rng.hpp>

#include "test_util.hpp"

using namespace corrohar;

namespace {

const LabelDictionary kDict2({"a", "b"});
const LabelDictionary kDict4 = gws_labels();

Decision decision(std::int64_t tick, int standalone, int corroborated, int k) {
    Decision d;
    d.tick_ms = tick;
    d.standalone_label = standalone;
    d.corroborated_label = corroborated;
    d.standalone_probs = Eigen::VectorXd::Zero(k);
    d.standalone_probs[standalone] = 1.0;
    d.corroborated_probs = Eigen::VectorXd::Zero(k);
    d.corroborated_probs[corroborated] = 1.0;
    return d;
}

// One session per truth class; preds[i] lists that session's predictions.
std::vector<SessionTrace> traces_from(const LabelDictionary& dict,
                                      const std::vector<std::vector<int>>& preds) {
    std::vector<SessionTrace> traces;
    for (std::size_t truth = 0; truth < preds.size(); ++truth) {
        SessionTrace t;
        t.session_id = "s" + std::to_string(truth);
        t.truth = dict.label(static_cast<int>(truth));
        DeviceTrace dev;
        dev.device_id = "u0";
        for (std::size_t i = 0; i < preds[truth].size(); ++i) {
            dev.decisions.push_back(
                decision(static_cast<std::int64_t>(10000 + 5000 * i), preds[truth][i],
                         preds[truth][i], dict.size()));
        }
        t.devices.push_back(std::move(dev));
        traces.push_back(std::move(t));
    }
    return traces;
}

}  // namespace

TEST_CASE("the worked 2x2 example: confusion [[2,0],[1,1]]") {
    // truth a predicted a,a; truth b predicted a,b.
    const auto traces = traces_from(kDict2, {{0, 0}, {0, 1}});
    const auto r = score(traces, PredictionMode::standalone, kDict2);

    CHECK(r.confusion(0, 0) == 2);
    CHECK(r.confusion(0, 1) == 0);
    CHECK(r.confusion(1, 0) == 1);
    CHECK(r.confusion(1, 1) == 1);
    CHECK(r.accuracy == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.macro_recall == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(std::abs(r.macro_precision - 5.0 / 6.0) <= 1e-9);
}

TEST_CASE("perfect predictions score 1 with a diagonal confusion") {
    const auto traces = traces_from(kDict4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    const auto r = score(traces, PredictionMode::corroborated, kDict4);
    CHECK(r.accuracy == 1.0);
    CHECK(r.macro_recall == 1.0);
    CHECK(r.macro_precision == 1.0);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i != j) CHECK(r.confusion(i, j) == 0);
        }
    }
}

TEST_CASE("a never-predicted class contributes zero precision") {
    // Class b exists in truth but every prediction says a.
    const auto traces = traces_from(kDict2, {{0, 0}, {0, 0}});
    const auto r = score(traces, PredictionMode::standalone, kDict2);
    CHECK(r.accuracy == 0.5);
    CHECK(r.macro_recall == 0.5);                 // (1 + 0) / 2
    CHECK(r.macro_precision == 0.25);             // (0.5 + 0) / 2
}

TEST_CASE("accuracy equals trace(confusion)/total on random traces") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<int>> preds(4);
        for (auto& p : preds) {
            const std::size_t n = 1 + rng.uniform_index(30);
            for (std::size_t i = 0; i < n; ++i) {
                p.push_back(static_cast<int>(rng.uniform_index(4)));
            }
        }
        const auto traces = traces_from(kDict4, preds);
        const auto r = score(traces, PredictionMode::corroborated, kDict4);

        std::int64_t diag = 0, total = 0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) total += r.confusion(i, j);
            diag += r.confusion(i, i);
        }
        CHECK(r.accuracy == static_cast<double>(diag) / static_cast<double>(total));
        CHECK(total == r.total_decisions);

        // Row sums are the per-class truth counts.
        for (int i = 0; i < 4; ++i) {
            CHECK(r.confusion.row(i).sum() ==
                  static_cast<std::int64_t>(preds[static_cast<std::size_t>(i)].size()));
        }

        // Permuting trace order changes nothing.
        auto shuffled = traces;
        std::reverse(shuffled.begin(), shuffled.end());
        const auto r2 = score(shuffled, PredictionMode::corroborated, kDict4);
        CHECK(r2.accuracy == r.accuracy);
        CHECK(r2.confusion == r.confusion);
    }
}

TEST_CASE("standalone and corroborated modes read their own labels") {
    SessionTrace t;
    t.session_id = "s";
    t.truth = kDict2.label(1);
    DeviceTrace dev;
    dev.device_id = "u0";
    Decision d = decision(10000, 0, 1, 2);
    dev.decisions.push_back(d);
    t.devices.push_back(dev);

    const auto standalone = score({t}, PredictionMode::standalone, kDict2);
    const auto corroborated = score({t}, PredictionMode::corroborated, kDict2);
    CHECK(standalone.accuracy == 0.0);
    CHECK(corroborated.accuracy == 1.0);
}

TEST_CASE("compare reports both readings of the published improvement") {
    // Accuracy pair from the published results table: 0.8168 -> 0.9220.
    MetricsReport st, co;
    st.mode = PredictionMode::standalone;
    st.accuracy = 0.8168;
    st.total_decisions = 10000;
    co.mode = PredictionMode::corroborated;
    co.accuracy = 0.9220;
    co.total_decisions = 10000;

    const auto summary = compare(st, co);
    CHECK(std::abs(summary.absolute_gain - 0.1052) <= 1e-9);
    CHECK(summary.relative_gain == doctest::Approx(0.1052 / 0.8168).epsilon(1e-9));
    CHECK(summary.relative_gain * 100.0 == doctest::Approx(12.879).epsilon(1e-3));
}

TEST_CASE("equal reports compare to zero deltas") {
    MetricsReport r;
    r.accuracy = 0.5;
    r.total_decisions = 10;
    const auto summary = compare(r, r);
    CHECK(summary.absolute_gain == 0.0);
    CHECK(summary.relative_gain == 0.0);
}

TEST_CASE("0.5 to 0.6 is ten points and twenty percent") {
    MetricsReport st, co;
    st.accuracy = 0.5;
    st.total_decisions = 100;
    co.accuracy = 0.6;
    co.total_decisions = 100;
    const auto summary = compare(st, co);
    CHECK(summary.absolute_gain == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(summary.relative_gain == doctest::Approx(0.20).epsilon(1e-12));
}

TEST_CASE("scoring rejects empty input, compare rejects mismatched counts") {
    CHECK_THROWS_AS(score({}, PredictionMode::standalone, kDict2), ScoringError);

    SessionTrace empty;
    empty.session_id = "s";
    empty.truth = kDict2.label(0);
    CHECK_THROWS_AS(score({empty}, PredictionMode::standalone, kDict2), ScoringError);

    MetricsReport a, b;
    a.total_decisions = 5;
    b.total_decisions = 6;
    CHECK_THROWS_AS(compare(a, b), ComparisonError);
}

TEST_CASE("report and confusion files carry the expected fields") {
    const auto traces = traces_from(kDict2, {{0, 0}, {0, 1}});
    const auto st = score(traces, PredictionMode::standalone, kDict2);
    const auto co = score(traces, PredictionMode::corroborated, kDict2);
    const auto summary = compare(st, co);

    TempDir dir;
    write_report_json(st, co, summary, kDict2, dir.file("report.json"));
    write_confusion_csv(st, kDict2, dir.file("confusion.csv"));
    write_ablation_csv(st, co, dir.file("ablation.csv"));

    const auto report = read_file(dir.file("report.json"));
    CHECK(report.find("\"standalone\"") != std::string::npos);
    CHECK(report.find("\"corroborated\"") != std::string::npos);
    CHECK(report.find("\"absolute_gain\"") != std::string::npos);

    const auto confusion = read_file(dir.file("confusion.csv"));
    CHECK(confusion.find("truth\\predicted,a,b\n") == 0);
    CHECK(confusion.find("a,2,0\n") != std::string::npos);
    CHECK(confusion.find("b,1,1\n") != std::string::npos);

    const auto ablation = read_file(dir.file("ablation.csv"));
    CHECK(ablation.find("mode,accuracy,recall_macro,precision_macro\n") == 0);
    CHECK(ablation.find("standalone,") != std::string::npos);
    CHECK(ablation.find("corroborated,") != std::string::npos);
}
