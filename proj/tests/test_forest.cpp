#include <doctest.h>

#include <corrohar/forest.hpp>
#include <corrohar/rng.hpp>

#include "test_util.hpp"

using namespace corrohar;

namespace {

const LabelDictionary kDict2({"a", "b"});
const LabelDictionary kDict3({"a", "b", "c"});

// Well-separated Gaussian blobs, one per class.
LabeledFeatures blobs(const LabelDictionary& dict, int per_class, std::uint64_t seed,
                      double spread = 0.5, int dims = 6) {
    Rng rng(seed);
    LabeledFeatures out;
    out.x.resize(dict.size() * per_class, dims);
    Eigen::Index row = 0;
    for (int c = 0; c < dict.size(); ++c) {
        for (int i = 0; i < per_class; ++i) {
            for (int d = 0; d < dims; ++d) {
                out.x(row, d) = 4.0 * static_cast<double>(c) + spread * rng.normal();
            }
            out.y.push_back(c);
            ++row;
        }
    }
    return out;
}

Eigen::VectorXd counts(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

}  // namespace

TEST_CASE("gini impurity unit values") {
    CHECK(gini_impurity(counts({2, 2})) == 0.5);
    CHECK(gini_impurity(counts({4, 0})) == 0.0);
    CHECK(gini_impurity(counts({0, 7})) == 0.0);
    CHECK(gini_impurity(counts({1, 1, 1, 1})) == 0.75);
    CHECK(gini_impurity(counts({0, 0})) == 0.0);
}

TEST_CASE("separable blobs are learned to training accuracy ~1") {
    const auto data = blobs(kDict3, 60, 5);
    ForestConfig cfg;
    cfg.n_trees = 20;
    cfg.seed = 5;
    const auto model = train_forest(data, cfg, kDict3, 1);

    int hits = 0;
    for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
        const Eigen::VectorXd p = model.predict_proba(data.x.row(i).transpose());
        int best = 0;
        for (int c = 1; c < p.size(); ++c) {
            if (p[c] > p[best]) best = c;
        }
        if (best == data.y[static_cast<std::size_t>(i)]) ++hits;
    }
    CHECK(static_cast<double>(hits) / static_cast<double>(data.x.rows()) >= 0.99);
}

TEST_CASE("probabilities are a simplex point") {
    const auto data = blobs(kDict2, 40, 6);
    ForestConfig cfg;
    cfg.n_trees = 30;
    cfg.seed = 6;
    const auto model = train_forest(data, cfg, kDict2, 1);

    Rng rng(123);
    for (int i = 0; i < 200; ++i) {
        Eigen::VectorXd x(6);
        for (int d = 0; d < 6; ++d) x[d] = rng.uniform(-2.0, 10.0);
        const Eigen::VectorXd p = model.predict_proba(x);
        CHECK(p.minCoeff() >= 0.0);
        CHECK(std::abs(p.sum() - 1.0) <= 1e-9);
    }
}

TEST_CASE("a single tree without bootstrap is a plain deterministic tree") {
    const auto data = blobs(kDict2, 30, 7);
    ForestConfig cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = false;
    cfg.max_features = FeatureSampling::all;
    cfg.seed = 99;

    const auto m1 = train_forest(data, cfg, kDict2, 1);
    const auto m2 = train_forest(data, cfg, kDict2, 1);
    REQUIRE(m1.trees().size() == 1);
    CHECK(m1.trees()[0].nodes().size() == m2.trees()[0].nodes().size());
    for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
        const Eigen::VectorXd a = m1.predict_proba(data.x.row(i).transpose());
        const Eigen::VectorXd b = m2.predict_proba(data.x.row(i).transpose());
        CHECK(a == b);
        // Full tree on clean data: every training row lands in a pure leaf.
        CHECK(a.maxCoeff() == 1.0);
    }
}

TEST_CASE("tree scheduling does not change the model") {
    const auto data = blobs(kDict3, 25, 8);
    ForestConfig cfg;
    cfg.n_trees = 12;
    cfg.seed = 31;
    const auto serial = train_forest(data, cfg, kDict3, 1);
    const auto threaded = train_forest(data, cfg, kDict3, 4);

    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd x(6);
        for (int d = 0; d < 6; ++d) x[d] = rng.uniform(-1.0, 9.0);
        CHECK(serial.predict_proba(x) == threaded.predict_proba(x));
    }
}

TEST_CASE("mean over trees: two hand-built leaves") {
    std::vector<DecisionTree> trees;
    trees.emplace_back(std::vector<DecisionTree::Node>{{-1, 0.0, -1, -1, counts({4, 0})}});
    trees.emplace_back(std::vector<DecisionTree::Node>{{-1, 0.0, -1, -1, counts({2, 2})}});
    const RandomForest forest({}, kDict2, 3, std::move(trees));

    const Eigen::VectorXd p = forest.predict_proba(Eigen::Vector3d(0, 0, 0));
    CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("prediction is invariant to tree order") {
    const auto data = blobs(kDict2, 20, 9);
    ForestConfig cfg;
    cfg.n_trees = 8;
    cfg.seed = 77;
    const auto model = train_forest(data, cfg, kDict2, 1);

    auto reversed_trees = model.trees();
    std::reverse(reversed_trees.begin(), reversed_trees.end());
    const RandomForest reversed(cfg, kDict2, model.n_features(), std::move(reversed_trees));

    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd x(6);
        for (int d = 0; d < 6; ++d) x[d] = rng.uniform(-1.0, 5.0);
        const Eigen::VectorXd a = model.predict_proba(x);
        const Eigen::VectorXd b = reversed.predict_proba(x);
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("dimension mismatches and degenerate inputs raise") {
    const auto data = blobs(kDict2, 10, 10);
    ForestConfig cfg;
    cfg.n_trees = 3;
    const auto model = train_forest(data, cfg, kDict2, 1);
    CHECK_THROWS_AS(model.predict_proba(Eigen::Vector3d(1, 2, 3)), InputError);

    LabeledFeatures single;
    single.x = Eigen::MatrixXd::Random(6, 4);
    single.y = {1, 1, 1, 1, 1, 1};
    CHECK_THROWS_AS(train_forest(single, cfg, kDict2, 1), TrainingError);
}

TEST_CASE("model JSON survives a save/load round trip") {
    const auto data = blobs(kDict3, 15, 11);
    ForestConfig cfg;
    cfg.n_trees = 5;
    cfg.seed = 13;
    const auto model = train_forest(data, cfg, kDict3, 1);

    TempDir dir;
    save_model(model, dir.file("model.json"));
    const auto loaded = load_model(dir.file("model.json"));

    CHECK(loaded.labels() == model.labels());
    CHECK(loaded.n_features() == model.n_features());
    CHECK(loaded.config().n_trees == 5);
    CHECK(loaded.trees().size() == model.trees().size());

    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd x(6);
        for (int d = 0; d < 6; ++d) x[d] = rng.uniform(-1.0, 9.0);
        CHECK(loaded.predict_proba(x) == model.predict_proba(x));
    }

    // Canonical bytes: saving the loaded model reproduces the file.
    save_model(loaded, dir.file("model2.json"));
    CHECK(read_file(dir.file("model.json")) == read_file(dir.file("model2.json")));

    CHECK_THROWS_AS(load_model(dir.file("missing.json")), IoError);
    write_file(dir.file("junk.json"), "{broken");
    CHECK_THROWS_AS(load_model(dir.file("junk.json")), FormatError);
}

TEST_CASE("leaf histograms sum to their training-sample counts") {
    const auto data = blobs(kDict2, 25, 12);
    ForestConfig cfg;
    cfg.n_trees = 4;
    cfg.seed = 3;
    const auto model = train_forest(data, cfg, kDict2, 1);

    for (const auto& tree : model.trees()) {
        double leaf_total = 0.0;
        for (const auto& node : tree.nodes()) {
            if (node.feature < 0) {
                CHECK(node.counts.sum() >= 1.0);
                leaf_total += node.counts.sum();
            }
        }
        // Bootstrap keeps n draws in play; every draw ends in exactly one leaf.
        CHECK(leaf_total == static_cast<double>(data.x.rows()));
    }
}
