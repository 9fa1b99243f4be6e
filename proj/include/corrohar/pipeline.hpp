#pragma once

#include <cstdint>
#include <vector>

#include "corrohar/dataset.hpp"
#include "corrohar/evaluation.hpp"
#include "corrohar/forest.hpp"
#include "corrohar/rng.hpp"
#include "corrohar/simulator.hpp"
#include "corrohar/smote.hpp"
#include "corrohar/split.hpp"

namespace corrohar {

// Seed fan-out roles: one top-level seed drives the whole experiment.
inline std::uint64_t subseed(std::uint64_t master, std::string_view role) {
    return derive_seed(master, role);
}

// Gap-repair + windowing over a whole corpus.
std::vector<LabeledWindow> corpus_windows(const std::vector<Session>& sessions,
                                          const WindowSpec& spec, std::int64_t max_gap_ms);

// Stacks extract_features over a window list.
LabeledFeatures features_of(const std::vector<LabeledWindow>& windows);

struct TrainOptions {
    WindowSpec window;
    std::int64_t max_gap_ms = kDefaultMaxGapMs;
    double test_fraction = 0.2;
    SplitMode split_mode = SplitMode::window;
    SmoteConfig smote;
    ForestConfig forest;
    std::uint64_t seed = 0;  // fans out to split/smote/forest sub-seeds
};

struct TrainOutcome {
    RandomForest model;
    std::size_t n_train = 0;
    std::size_t n_train_balanced = 0;
    std::size_t n_test = 0;
    double test_accuracy = 0.0;
};

// The reference protocol: windows -> split -> SMOTE on the training side ->
// forest. Reports held-out standalone accuracy.
TrainOutcome train_pipeline(const std::vector<Session>& sessions, const LabelDictionary& dict,
                            const TrainOptions& opt);

// Fraction of rows whose argmax matches the label.
double standalone_accuracy(const BackboneModel& model, const LabeledFeatures& data);

}  // namespace corrohar
