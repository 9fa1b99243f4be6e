#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "corrohar/types.hpp"

namespace corrohar {

// Feature matrix (rows = samples) with per-row class ids.
struct LabeledFeatures {
    Eigen::MatrixXd x;
    std::vector<int> y;

    std::size_t size() const { return y.size(); }
};

struct SmoteConfig {
    int k_neighbors = 5;
    std::uint64_t seed = 0;
};

// Oversamples every minority class up to the majority count. Each synthetic
// row is x + λ(neighbor - x) with λ uniform in (0,1) and the neighbor drawn
// from the k nearest same-class rows under Euclidean distance. Original rows
// are kept in place, synthetics appended grouped by class id. BalanceError
// (naming the class) when a class has fewer than 2 rows.
LabeledFeatures smote_balance(const LabeledFeatures& train, const SmoteConfig& cfg,
                              const LabelDictionary& dict);

}  // namespace corrohar
