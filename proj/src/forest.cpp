#include "corrohar/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <thread>

#include "corrohar/rng.hpp"

namespace corrohar {

double gini_impurity(const Eigen::Ref<const Eigen::VectorXd>& counts) {
    const double n = counts.sum();
    if (n <= 0.0) return 0.0;
    return 1.0 - (counts / n).squaredNorm();
}

Eigen::VectorXd DecisionTree::predict_proba(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const Eigen::VectorXd& counts = leaf_counts(x);
    return counts / counts.sum();
}

const Eigen::VectorXd& DecisionTree::leaf_counts(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
        const Node& node = nodes_[static_cast<std::size_t>(i)];
        i = x[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes_[static_cast<std::size_t>(i)].counts;
}

Eigen::VectorXd RandomForest::predict_proba(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != n_features_) {
        throw InputError("feature vector has dimension " + std::to_string(x.size()) +
                         ", model expects " + std::to_string(n_features_));
    }
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(labels_.size());
    for (const auto& tree : trees_) acc += tree.predict_proba(x);
    return acc / static_cast<double>(trees_.size());
}

namespace {

struct TreeBuilder {
    const Eigen::MatrixXd& x;
    const std::vector<int>& y;
    int k_classes;
    int min_samples_split;
    int candidates_per_split;
    Rng rng;

    std::vector<DecisionTree::Node> nodes;
    std::vector<Eigen::Index> rows;        // sample indices, permuted per node
    std::vector<int> feature_pool;         // scratch for candidate drawing
    std::vector<std::pair<double, int>> sorted;  // (value, class) scratch

    Eigen::VectorXd histogram(std::size_t begin, std::size_t end) const {
        Eigen::VectorXd h = Eigen::VectorXd::Zero(k_classes);
        for (std::size_t i = begin; i < end; ++i) h[y[static_cast<std::size_t>(rows[i])]] += 1.0;
        return h;
    }

    // Best (feature, threshold) by weighted child gini; ties resolved toward
    // the lowest feature index, then the lowest threshold.
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double weighted_gini = 0.0;
    };

    Split best_split(std::size_t begin, std::size_t end, const Eigen::VectorXd& parent_hist) {
        const auto n = static_cast<double>(end - begin);

        // Draw the candidate subset, then scan it in ascending index order.
        for (int f = 0; f < static_cast<int>(feature_pool.size()); ++f) feature_pool[f] = f;
        const auto total = static_cast<int>(feature_pool.size());
        const int k = std::min(candidates_per_split, total);
        for (int i = 0; i < k; ++i) {
            const auto j = i + static_cast<int>(rng.uniform_index(
                                   static_cast<std::size_t>(total - i)));
            std::swap(feature_pool[i], feature_pool[j]);
        }
        std::sort(feature_pool.begin(), feature_pool.begin() + k);

        Split best;
        best.weighted_gini = gini_impurity(parent_hist);

        Eigen::VectorXd left = Eigen::VectorXd::Zero(k_classes);
        for (int ci = 0; ci < k; ++ci) {
            const int f = feature_pool[static_cast<std::size_t>(ci)];
            sorted.clear();
            for (std::size_t i = begin; i < end; ++i) {
                const auto row = rows[i];
                sorted.emplace_back(x(row, f), y[static_cast<std::size_t>(row)]);
            }
            std::sort(sorted.begin(), sorted.end());

            left.setZero();
            Eigen::VectorXd right = parent_hist;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                left[sorted[i].second] += 1.0;
                right[sorted[i].second] -= 1.0;
                if (sorted[i].first == sorted[i + 1].first) continue;

                const auto n_left = static_cast<double>(i + 1);
                const double w = (n_left * gini_impurity(left) +
                                  (n - n_left) * gini_impurity(right)) /
                                 n;
                if (w < best.weighted_gini - 1e-12) {
                    double t = 0.5 * (sorted[i].first + sorted[i + 1].first);
                    // Keep the lower value on the left when the midpoint
                    // rounds up to the higher one.
                    if (t >= sorted[i + 1].first) t = sorted[i].first;
                    best.feature = f;
                    best.threshold = t;
                    best.weighted_gini = w;
                }
            }
        }
        return best;
    }

    int build(std::size_t begin, std::size_t end) {
        const Eigen::VectorXd hist = histogram(begin, end);
        const auto node_index = static_cast<int>(nodes.size());

        const bool pure = (hist.array() > 0.0).count() <= 1;
        if (pure || end - begin < static_cast<std::size_t>(min_samples_split)) {
            nodes.push_back({-1, 0.0, -1, -1, hist});
            return node_index;
        }

        const Split split = best_split(begin, end, hist);
        if (split.feature < 0) {  // no split reduces impurity
            nodes.push_back({-1, 0.0, -1, -1, hist});
            return node_index;
        }

        nodes.push_back({split.feature, split.threshold, -1, -1, {}});
        const auto mid = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                        rows.begin() + static_cast<std::ptrdiff_t>(end),
                                        [&](Eigen::Index r) {
                                            return x(r, split.feature) <= split.threshold;
                                        }) -
                         rows.begin();
        // std::partition keeps the index multiset; child order within a side
        // does not affect histograms or further sorting.
        nodes[static_cast<std::size_t>(node_index)].left =
            build(begin, static_cast<std::size_t>(mid));
        nodes[static_cast<std::size_t>(node_index)].right =
            build(static_cast<std::size_t>(mid), end);
        return node_index;
    }
};

DecisionTree train_tree(const Eigen::MatrixXd& x, const std::vector<int>& y, int k_classes,
                        const ForestConfig& config, std::uint64_t tree_seed) {
    const auto n = static_cast<std::size_t>(x.rows());
    const auto n_features = static_cast<int>(x.cols());

    int candidates = n_features;
    if (config.max_features == FeatureSampling::sqrt_total) {
        candidates = std::max(1, static_cast<int>(std::floor(std::sqrt(n_features))));
    }

    TreeBuilder builder{x,
                        y,
                        k_classes,
                        std::max(2, config.min_samples_split),
                        candidates,
                        Rng(derive_seed(tree_seed, "node-rng")),
                        {},
                        {},
                        std::vector<int>(static_cast<std::size_t>(n_features)),
                        {}};
    builder.rows.resize(n);
    if (config.bootstrap) {
        Rng boot(derive_seed(tree_seed, "bootstrap"));
        for (auto& r : builder.rows) r = static_cast<Eigen::Index>(boot.uniform_index(n));
        std::sort(builder.rows.begin(), builder.rows.end());
    } else {
        std::iota(builder.rows.begin(), builder.rows.end(), Eigen::Index{0});
    }
    builder.sorted.reserve(n);
    builder.build(0, n);
    return DecisionTree(std::move(builder.nodes));
}

}  // namespace

RandomForest train_forest(const LabeledFeatures& train, const ForestConfig& config,
                          const LabelDictionary& dict, int n_threads) {
    if (config.n_trees < 1) throw ConfigError("n_trees must be >= 1");
    if (train.x.rows() < 2 || train.x.rows() != static_cast<Eigen::Index>(train.y.size())) {
        throw TrainingError("need at least 2 labeled rows to train");
    }

    int distinct = 0;
    std::vector<char> seen(static_cast<std::size_t>(dict.size()), 0);
    for (int label : train.y) {
        if (label < 0 || label >= dict.size()) {
            throw TrainingError("label id out of dictionary range");
        }
        if (!seen[static_cast<std::size_t>(label)]) {
            seen[static_cast<std::size_t>(label)] = 1;
            ++distinct;
        }
    }
    if (distinct < 2) throw TrainingError("training data contains a single class");

    std::vector<DecisionTree> trees(static_cast<std::size_t>(config.n_trees));
    if (n_threads <= 0) {
        n_threads = static_cast<int>(std::thread::hardware_concurrency());
        if (n_threads <= 0) n_threads = 1;
    }
    n_threads = std::min(n_threads, config.n_trees);

    // Tree i is a pure function of (data, config, seed, i); threads only
    // decide who computes which slot.
    auto worker = [&](int first) {
        for (int i = first; i < config.n_trees; i += n_threads) {
            trees[static_cast<std::size_t>(i)] =
                train_tree(train.x, train.y, dict.size(), config,
                           derive_seed(config.seed, "tree", static_cast<std::uint64_t>(i)));
        }
    };
    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }

    return RandomForest(config, dict, static_cast<int>(train.x.cols()), std::move(trees));
}

// --- persistence ---

namespace {

constexpr int kFormatVersion = 1;

nlohmann::json config_to_json(const ForestConfig& c) {
    return {{"n_trees", c.n_trees},
            {"min_samples_split", c.min_samples_split},
            {"max_features", c.max_features == FeatureSampling::sqrt_total ? "sqrt" : "all"},
            {"bootstrap", c.bootstrap},
            {"seed", c.seed}};
}

ForestConfig config_from_json(const nlohmann::json& j) {
    ForestConfig c;
    c.n_trees = j.at("n_trees").get<int>();
    c.min_samples_split = j.at("min_samples_split").get<int>();
    const auto strategy = j.at("max_features").get<std::string>();
    if (strategy == "sqrt") {
        c.max_features = FeatureSampling::sqrt_total;
    } else if (strategy == "all") {
        c.max_features = FeatureSampling::all;
    } else {
        throw FormatError("unknown max_features strategy: " + strategy);
    }
    c.bootstrap = j.at("bootstrap").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace

void save_model(const RandomForest& forest, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["format_version"] = kFormatVersion;
    doc["labels"] = forest.labels().names();
    doc["forest_config"] = config_to_json(forest.config());
    doc["n_features"] = forest.n_features();

    auto& trees = doc["trees"] = nlohmann::json::array();
    for (const auto& tree : forest.trees()) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& node : tree.nodes()) {
            if (node.feature < 0) {
                std::vector<double> counts(node.counts.data(),
                                           node.counts.data() + node.counts.size());
                nodes.push_back({{"counts", counts}});
            } else {
                nodes.push_back({{"feature", node.feature},
                                 {"threshold", node.threshold},
                                 {"left", node.left},
                                 {"right", node.right}});
            }
        }
        trees.push_back({{"nodes", std::move(nodes)}});
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump() << '\n';
}

RandomForest load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": invalid model JSON: " + e.what());
    }

    try {
        if (doc.at("format_version").get<int>() != kFormatVersion) {
            throw FormatError(path.string() + ": unsupported model format version");
        }
        LabelDictionary labels(doc.at("labels").get<std::vector<std::string>>());
        ForestConfig config = config_from_json(doc.at("forest_config"));
        const int n_features = doc.at("n_features").get<int>();

        std::vector<DecisionTree> trees;
        for (const auto& jt : doc.at("trees")) {
            std::vector<DecisionTree::Node> nodes;
            for (const auto& jn : jt.at("nodes")) {
                DecisionTree::Node node;
                if (jn.contains("counts")) {
                    const auto counts = jn.at("counts").get<std::vector<double>>();
                    node.counts = Eigen::Map<const Eigen::VectorXd>(
                        counts.data(), static_cast<Eigen::Index>(counts.size()));
                } else {
                    node.feature = jn.at("feature").get<int>();
                    node.threshold = jn.at("threshold").get<double>();
                    node.left = jn.at("left").get<int>();
                    node.right = jn.at("right").get<int>();
                }
                nodes.push_back(std::move(node));
            }
            trees.emplace_back(std::move(nodes));
        }
        return RandomForest(config, std::move(labels), n_features, std::move(trees));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": invalid model JSON: " + e.what());
    }
}

}  // namespace corrohar
