#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "corrohar/smote.hpp"
#include "corrohar/types.hpp"

namespace corrohar {

// Anything that turns a feature vector into per-activity probabilities can
// back a device; the protocol only fixes this output representation.
class BackboneModel {
public:
    virtual ~BackboneModel() = default;

    // Non-negative, sums to 1 within 1e-9. InputError on a dimension mismatch.
    virtual Eigen::VectorXd predict_proba(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;

    virtual const LabelDictionary& labels() const = 0;
};

enum class FeatureSampling {
    sqrt_total,  // floor(sqrt(F)) candidates per split
    all
};

struct ForestConfig {
    int n_trees = 100;
    int min_samples_split = 2;
    FeatureSampling max_features = FeatureSampling::sqrt_total;
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

// Gini impurity 1 - Σ pᵢ² of a class-count histogram.
double gini_impurity(const Eigen::Ref<const Eigen::VectorXd>& counts);

// CART tree with axis-aligned splits and class-count leaves. Stored as a flat
// node array; feature < 0 marks a leaf.
class DecisionTree {
public:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        Eigen::VectorXd counts;  // leaves only
    };

    explicit DecisionTree(std::vector<Node> nodes = {}) : nodes_(std::move(nodes)) {}

    const std::vector<Node>& nodes() const { return nodes_; }

    // Class proportions of the leaf x routes to.
    Eigen::VectorXd predict_proba(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    const Eigen::VectorXd& leaf_counts(const Eigen::Ref<const Eigen::VectorXd>& x) const;

private:
    std::vector<Node> nodes_;
};

class RandomForest final : public BackboneModel {
public:
    RandomForest(ForestConfig config, LabelDictionary labels, int n_features,
                 std::vector<DecisionTree> trees)
        : config_(std::move(config)),
          labels_(std::move(labels)),
          n_features_(n_features),
          trees_(std::move(trees)) {}

    // Mean over trees of leaf class proportions.
    Eigen::VectorXd predict_proba(const Eigen::Ref<const Eigen::VectorXd>& x) const override;

    const LabelDictionary& labels() const override { return labels_; }

    const ForestConfig& config() const { return config_; }
    int n_features() const { return n_features_; }
    const std::vector<DecisionTree>& trees() const { return trees_; }

private:
    ForestConfig config_;
    LabelDictionary labels_;
    int n_features_ = 0;
    std::vector<DecisionTree> trees_;
};

// Trains one tree per bootstrap resample. Tree i draws all of its randomness
// from a seed derived as (config.seed, "tree", i), so results do not depend
// on how the trees are scheduled across threads. n_threads 0 picks the
// hardware count. TrainingError on single-class input.
RandomForest train_forest(const LabeledFeatures& train, const ForestConfig& config,
                          const LabelDictionary& dict, int n_threads = 0);

// Versioned JSON persistence (format_version, labels, forest_config,
// n_features, trees).
void save_model(const RandomForest& forest, const std::filesystem::path& path);
RandomForest load_model(const std::filesystem::path& path);

}  // namespace corrohar
