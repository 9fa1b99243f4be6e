#include "corrohar/features.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

namespace corrohar {

FeatureVector extract_features(const LabeledWindow& w) {
    const ChannelMatrix& ch = w.channels;
    if (ch.rows() < 2) throw ComputationError("window has fewer than 2 samples");
    if (!ch.allFinite()) {
        for (Eigen::Index c = 0; c < ch.cols(); ++c) {
            for (Eigen::Index i = 0; i < ch.rows(); ++i) {
                if (!std::isfinite(ch(i, c))) {
                    throw ComputationError(std::string("non-finite sample in channel ") +
                                           kChannelNames[c] + " at index " + std::to_string(i));
                }
            }
        }
    }

    const double sma = signal_magnitude_area(ch.col(0), ch.col(1), ch.col(2));

    FeatureVector f;
    for (int c = 0; c < kChannelCount; ++c) {
        const auto col = ch.col(c);
        const int base = c * kFeaturesPerChannel;
        f[base + kFeatMean] = channel_mean(col);
        f[base + kFeatVariance] = channel_variance(col);
        f[base + kFeatMax] = col.maxCoeff();
        f[base + kFeatMin] = col.minCoeff();
        f[base + kFeatSkewness] = channel_skewness(col);
        f[base + kFeatKurtosis] = channel_kurtosis(col);
        f[base + kFeatEnergy] = total_energy(col);
        f[base + kFeatSma] = sma;
        f[base + kFeatZcr] = zero_crossing_rate(col);
    }
    return f;
}

void write_feature_csv(const std::vector<LabeledWindow>& windows,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());

    out << "session_id,subject_id,start_ms,label";
    for (int i = 0; i < kFeatureCount; ++i) {
        out << ",f" << (i < 10 ? "0" : "") << i;
    }
    out << '\n';

    char buf[32];
    for (const auto& w : windows) {
        out << w.session_id << ',' << w.subject_id << ',' << w.start_ms << ',' << w.label.name;
        const FeatureVector f = extract_features(w);
        for (int i = 0; i < kFeatureCount; ++i) {
            const auto r = std::to_chars(buf, buf + sizeof buf, f[i]);
            out << ',';
            out.write(buf, r.ptr - buf);
        }
        out << '\n';
    }
}

}  // namespace corrohar
