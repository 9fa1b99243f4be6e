#include "corrohar/smote.hpp"

#include <algorithm>
#include <numeric>

#include "corrohar/rng.hpp"

namespace corrohar {

LabeledFeatures smote_balance(const LabeledFeatures& train, const SmoteConfig& cfg,
                              const LabelDictionary& dict) {
    if (cfg.k_neighbors < 1) throw ConfigError("k_neighbors must be >= 1");
    if (train.x.rows() != static_cast<Eigen::Index>(train.y.size())) {
        throw InputError("feature matrix and label count disagree");
    }

    const int k_classes = dict.size();
    std::vector<std::vector<Eigen::Index>> by_class(static_cast<std::size_t>(k_classes));
    for (Eigen::Index i = 0; i < train.x.rows(); ++i) {
        const int y = train.y[static_cast<std::size_t>(i)];
        if (y < 0 || y >= k_classes) throw InputError("class id out of dictionary range");
        by_class[static_cast<std::size_t>(y)].push_back(i);
    }

    std::size_t majority = 0;
    for (const auto& rows : by_class) majority = std::max(majority, rows.size());

    std::size_t total = train.size();
    for (int c = 0; c < k_classes; ++c) {
        const auto& rows = by_class[static_cast<std::size_t>(c)];
        if (rows.empty()) continue;
        if (rows.size() < 2 && rows.size() < majority) {
            throw BalanceError("cannot balance class '" + dict.name(c) +
                               "': needs at least 2 samples");
        }
        total += majority - rows.size();
    }

    LabeledFeatures out;
    out.x.resize(static_cast<Eigen::Index>(total), train.x.cols());
    out.x.topRows(train.x.rows()) = train.x;
    out.y = train.y;
    out.y.reserve(total);

    Eigen::Index next_row = train.x.rows();
    for (int c = 0; c < k_classes; ++c) {
        const auto& rows = by_class[static_cast<std::size_t>(c)];
        const std::size_t deficit = rows.empty() ? 0 : majority - rows.size();
        if (deficit == 0) continue;

        Rng rng(derive_seed(cfg.seed, "smote-class", static_cast<std::uint64_t>(c)));
        const std::size_t k =
            std::min<std::size_t>(static_cast<std::size_t>(cfg.k_neighbors), rows.size() - 1);

        // Per-sample neighbor lists, built once; ties broken by row order.
        std::vector<std::vector<Eigen::Index>> neighbors(rows.size());
        std::vector<std::pair<double, Eigen::Index>> dist;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            dist.clear();
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (j == i) continue;
                dist.emplace_back((train.x.row(rows[i]) - train.x.row(rows[j])).norm(),
                                  rows[j]);
            }
            std::stable_sort(dist.begin(), dist.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (std::size_t j = 0; j < k; ++j) neighbors[i].push_back(dist[j].second);
        }

        for (std::size_t s = 0; s < deficit; ++s) {
            const std::size_t base = rng.uniform_index(rows.size());
            const Eigen::Index nb = neighbors[base][rng.uniform_index(k)];
            const double lambda = rng.uniform_open();
            out.x.row(next_row) =
                train.x.row(rows[base]) + lambda * (train.x.row(nb) - train.x.row(rows[base]));
            out.y.push_back(c);
            ++next_row;
        }
    }
    return out;
}

}  // namespace corrohar
