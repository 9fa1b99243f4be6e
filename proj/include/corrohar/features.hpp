#pragma once

#include <Eigen/Core>
#include <filesystem>

#include "corrohar/windows.hpp"

namespace corrohar {

// Per-channel feature order inside a FeatureVector block.
enum FeatureIndex {
    kFeatMean = 0,
    kFeatVariance,
    kFeatMax,
    kFeatMin,
    kFeatSkewness,
    kFeatKurtosis,
    kFeatEnergy,
    kFeatSma,
    kFeatZcr,
    kFeaturesPerChannel
};

inline constexpr int kFeatureCount = kChannelCount * kFeaturesPerChannel;  // 54

// Layout: channel-major blocks (ax, ay, az, gx, gy, gz), each block in
// FeatureIndex order. The SMA slot carries one shared value, the signal
// magnitude area of the three accelerometer channels, replicated into every
// block to keep the layout rectangular.
using FeatureVector = Eigen::Matrix<double, kFeatureCount, 1>;

// --- channel statistics, usable on any Eigen vector expression ---

template <typename Derived>
double channel_mean(const Eigen::DenseBase<Derived>& x) {
    return x.derived().mean();
}

// Population variance, Σ(x-mean)²/n.
template <typename Derived>
double channel_variance(const Eigen::DenseBase<Derived>& x) {
    const double m = x.derived().mean();
    return (x.derived().array() - m).square().mean();
}

// Moment skewness m3/m2^(3/2); 0 for a constant signal.
template <typename Derived>
double channel_skewness(const Eigen::DenseBase<Derived>& x) {
    const double m = x.derived().mean();
    const auto centered = x.derived().array() - m;
    const double m2 = centered.square().mean();
    if (m2 == 0.0) return 0.0;
    const double m3 = centered.cube().mean();
    return m3 / std::pow(m2, 1.5);
}

// Excess kurtosis m4/m2² - 3; 0 for a constant signal.
template <typename Derived>
double channel_kurtosis(const Eigen::DenseBase<Derived>& x) {
    const double m = x.derived().mean();
    const auto centered = x.derived().array() - m;
    const double m2 = centered.square().mean();
    if (m2 == 0.0) return 0.0;
    const double m4 = centered.square().square().mean();
    return m4 / (m2 * m2) - 3.0;
}

// Mean signal power, Σx²/n. Normalising by n keeps the value comparable
// across window lengths.
template <typename Derived>
double total_energy(const Eigen::DenseBase<Derived>& x) {
    return x.derived().array().square().mean();
}

// Fraction of consecutive pairs whose mean-centered values change sign.
// Counting against the mean rather than raw zero keeps the rate meaningful on
// gravity-offset accelerometer axes.
template <typename Derived>
double zero_crossing_rate(const Eigen::DenseBase<Derived>& x) {
    const auto& v = x.derived();
    const Eigen::Index n = v.size();
    if (n < 2) return 0.0;
    const double m = v.mean();
    int crossings = 0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if ((v[i] - m) * (v[i + 1] - m) < 0.0) ++crossings;
    }
    return static_cast<double>(crossings) / static_cast<double>(n - 1);
}

// Signal magnitude area over the three accelerometer channels,
// (Σ|ax| + Σ|ay| + Σ|az|)/n.
template <typename DA, typename DB, typename DC>
double signal_magnitude_area(const Eigen::DenseBase<DA>& ax, const Eigen::DenseBase<DB>& ay,
                             const Eigen::DenseBase<DC>& az) {
    return (ax.derived().array().abs() + ay.derived().array().abs() +
            az.derived().array().abs())
        .mean();
}

// The nine statistics for all six channels in the documented layout.
// ComputationError when a sample is non-finite, naming channel and row.
FeatureVector extract_features(const LabeledWindow& w);

// Optional feature dump: header session_id,subject_id,start_ms,label,f00..f53.
void write_feature_csv(const std::vector<LabeledWindow>& windows,
                       const std::filesystem::path& path);

}  // namespace corrohar
