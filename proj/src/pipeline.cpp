#include "corrohar/pipeline.hpp"

#include "corrohar/features.hpp"

namespace corrohar {

std::vector<LabeledWindow> corpus_windows(const std::vector<Session>& sessions,
                                          const WindowSpec& spec, std::int64_t max_gap_ms) {
    std::vector<LabeledWindow> windows;
    for (const auto& session : sessions) {
        for (const auto& stream : session.streams) {
            auto w = make_windows(repair_gaps(stream, max_gap_ms), spec, session.activity,
                                  session.session_id);
            windows.insert(windows.end(), std::make_move_iterator(w.begin()),
                           std::make_move_iterator(w.end()));
        }
    }
    return windows;
}

LabeledFeatures features_of(const std::vector<LabeledWindow>& windows) {
    LabeledFeatures out;
    out.x.resize(static_cast<Eigen::Index>(windows.size()), kFeatureCount);
    out.y.reserve(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        out.x.row(static_cast<Eigen::Index>(i)) = extract_features(windows[i]).transpose();
        out.y.push_back(windows[i].label.id);
    }
    return out;
}

double standalone_accuracy(const BackboneModel& model, const LabeledFeatures& data) {
    if (data.size() == 0) return 0.0;
    std::size_t hits = 0;
    for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
        Eigen::VectorXd probs = model.predict_proba(data.x.row(i).transpose());
        int best = 0;
        for (int c = 1; c < probs.size(); ++c) {
            if (probs[c] > probs[best]) best = c;
        }
        if (best == data.y[static_cast<std::size_t>(i)]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

TrainOutcome train_pipeline(const std::vector<Session>& sessions, const LabelDictionary& dict,
                            const TrainOptions& opt) {
    auto windows = corpus_windows(sessions, opt.window, opt.max_gap_ms);
    if (windows.size() < 2) throw TrainingError("corpus yields fewer than 2 windows");

    auto [train_windows, test_windows] =
        opt.split_mode == SplitMode::window
            ? split_train_test(std::move(windows), opt.test_fraction, subseed(opt.seed, "split"))
            : split_by_session(std::move(windows), opt.test_fraction, subseed(opt.seed, "split"));

    const LabeledFeatures train_features = features_of(train_windows);
    const LabeledFeatures test_features = features_of(test_windows);

    SmoteConfig smote = opt.smote;
    smote.seed = subseed(opt.seed, "smote");
    const LabeledFeatures balanced = smote_balance(train_features, smote, dict);

    ForestConfig forest = opt.forest;
    forest.seed = subseed(opt.seed, "forest");

    TrainOutcome outcome{train_forest(balanced, forest, dict), train_features.size(),
                         balanced.size(), test_features.size(), 0.0};
    outcome.test_accuracy = standalone_accuracy(outcome.model, test_features);
    return outcome;
}

}  // namespace corrohar
