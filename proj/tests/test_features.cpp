#include <doctest.h>

#include <cmath>
#include <corrohar/features.hpp>
#include <corrohar/rng.hpp>
#include <vector>

#include "test_util.hpp"

using namespace corrohar;

namespace {

// Plain-loop oracle, deliberately independent of the Eigen implementation.
struct Oracle {
    double mean = 0, variance = 0, max = 0, min = 0, skewness = 0, kurtosis = 0, energy = 0,
           zcr = 0;
};

Oracle oracle_stats(const std::vector<double>& x) {
    Oracle o;
    const auto n = static_cast<double>(x.size());
    o.max = x[0];
    o.min = x[0];
    for (double v : x) {
        o.mean += v;
        o.energy += v * v;
        if (v > o.max) o.max = v;
        if (v < o.min) o.min = v;
    }
    o.mean /= n;
    o.energy /= n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - o.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    o.variance = m2;
    o.skewness = m2 == 0.0 ? 0.0 : m3 / std::pow(m2, 1.5);
    o.kurtosis = m2 == 0.0 ? 0.0 : m4 / (m2 * m2) - 3.0;
    int crossings = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if ((x[i] - o.mean) * (x[i + 1] - o.mean) < 0.0) ++crossings;
    }
    o.zcr = static_cast<double>(crossings) / (n - 1.0);
    return o;
}

double oracle_sma(const std::vector<double>& ax, const std::vector<double>& ay,
                  const std::vector<double>& az) {
    double sum = 0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        sum += std::fabs(ax[i]) + std::fabs(ay[i]) + std::fabs(az[i]);
    }
    return sum / static_cast<double>(ax.size());
}

// Window whose six channels all carry the same signal.
LabeledWindow uniform_window(const std::vector<double>& signal) {
    LabeledWindow w;
    w.label = {0, "eating"};
    w.end_ms = static_cast<std::int64_t>(signal.size()) * 10;
    w.channels.resize(static_cast<Eigen::Index>(signal.size()), kChannelCount);
    for (Eigen::Index i = 0; i < w.channels.rows(); ++i) {
        w.channels.row(i).setConstant(signal[static_cast<std::size_t>(i)]);
    }
    return w;
}

void check_against_oracle(const std::vector<double>& signal, double tol = 1e-9) {
    const Oracle o = oracle_stats(signal);
    const double sma = oracle_sma(signal, signal, signal);
    const FeatureVector f = extract_features(uniform_window(signal));
    for (int c = 0; c < kChannelCount; ++c) {
        const int base = c * kFeaturesPerChannel;
        CHECK(std::abs(f[base + kFeatMean] - o.mean) <= tol);
        CHECK(std::abs(f[base + kFeatVariance] - o.variance) <= tol);
        CHECK(f[base + kFeatMax] == o.max);
        CHECK(f[base + kFeatMin] == o.min);
        CHECK(std::abs(f[base + kFeatSkewness] - o.skewness) <= tol);
        CHECK(std::abs(f[base + kFeatKurtosis] - o.kurtosis) <= tol);
        CHECK(std::abs(f[base + kFeatEnergy] - o.energy) <= tol);
        CHECK(std::abs(f[base + kFeatSma] - sma) <= tol);
        CHECK(std::abs(f[base + kFeatZcr] - o.zcr) <= tol);
    }
}

}  // namespace

TEST_CASE("constant channel: the degenerate identities") {
    const std::vector<double> x = {5, 5, 5, 5};
    const FeatureVector f = extract_features(uniform_window(x));
    CHECK(f[kFeatMean] == 5.0);
    CHECK(f[kFeatVariance] == 0.0);
    CHECK(f[kFeatSkewness] == 0.0);
    CHECK(f[kFeatKurtosis] == 0.0);
    CHECK(f[kFeatZcr] == 0.0);
    CHECK(f[kFeatEnergy] == 25.0);
    check_against_oracle(x);
}

TEST_CASE("alternating channel: every step crosses the mean") {
    const std::vector<double> x = {1, -1, 1, -1};
    const FeatureVector f = extract_features(uniform_window(x));
    CHECK(f[kFeatMean] == 0.0);
    CHECK(f[kFeatZcr] == 1.0);
    CHECK(f[kFeatEnergy] == 1.0);
    check_against_oracle(x);
}

TEST_CASE("short ramp: hand arithmetic") {
    const std::vector<double> x = {1, 2, 3, 4};
    const FeatureVector f = extract_features(uniform_window(x));
    CHECK(f[kFeatMean] == 2.5);
    CHECK(f[kFeatVariance] == 1.25);
    CHECK(f[kFeatMax] == 4.0);
    CHECK(f[kFeatMin] == 1.0);
    check_against_oracle(x);
}

TEST_CASE("long ramp matches the discrete-uniform closed forms") {
    const int n = 1000;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = i;
    const FeatureVector f = extract_features(uniform_window(x));
    const double nn = n;
    CHECK(std::abs(f[kFeatMean] - (nn - 1) / 2) <= 1e-9);
    CHECK(std::abs(f[kFeatVariance] - (nn * nn - 1) / 12) <= 1e-6);  // ~8.3e4, abs tol scaled
    CHECK(std::abs(f[kFeatSkewness] - 0.0) <= 1e-9);
    const double uniform_kurtosis = -6.0 * (nn * nn + 1) / (5.0 * (nn * nn - 1));
    CHECK(std::abs(f[kFeatKurtosis] - uniform_kurtosis) <= 1e-9);
    CHECK(std::abs(f[kFeatEnergy] - (nn - 1) * (2 * nn - 1) / 6) <= 1e-6);
    CHECK(std::abs(f[kFeatZcr] - 1.0 / (nn - 1)) <= 1e-12);  // one crossing at the middle
    check_against_oracle(x);
}

TEST_CASE("2 Hz unit sine over 10 s at 100 Hz") {
    std::vector<double> x(1000);
    for (int i = 0; i < 1000; ++i) {
        x[static_cast<std::size_t>(i)] = std::sin(2.0 * M_PI * 2.0 * i / 100.0);
    }
    const FeatureVector f = extract_features(uniform_window(x));
    // Frozen from the brute-force oracle: 39 mean-crossings over 999 pairs.
    CHECK(f[kFeatZcr] == doctest::Approx(39.0 / 999.0).epsilon(1e-12));
    CHECK(std::abs(f[kFeatVariance] - 0.5) <= 1e-12);
    CHECK(std::abs(f[kFeatEnergy] - 0.5) <= 1e-12);
    check_against_oracle(x);
}

TEST_CASE("SMA is the shared accelerometer magnitude area") {
    LabeledWindow w;
    w.label = {0, "eating"};
    w.channels.resize(2, kChannelCount);
    w.channels << 1, -2, 3, 100, 100, 100,  //
        -1, 2, -3, 100, 100, 100;
    const FeatureVector f = extract_features(w);
    // (|1|+|−1| + |−2|+|2| + |3|+|−3|) / 2 = 6
    for (int c = 0; c < kChannelCount; ++c) {
        CHECK(f[c * kFeaturesPerChannel + kFeatSma] == doctest::Approx(6.0).epsilon(1e-12));
    }
}

TEST_CASE("channel-major layout is stable and repeatable") {
    LabeledWindow w;
    w.label = {0, "eating"};
    w.channels.resize(3, kChannelCount);
    for (int c = 0; c < kChannelCount; ++c) {
        w.channels.col(c) = Eigen::Vector3d(c, c + 0.5, 2.0 * c);
    }
    const FeatureVector a = extract_features(w);
    const FeatureVector b = extract_features(w);
    CHECK(a == b);
    // Channel blocks see their own data: means differ per channel.
    CHECK(a[0 * kFeaturesPerChannel + kFeatMean] == doctest::Approx(0.5 / 3.0 * 1.0).epsilon(1e-9));
    CHECK(a[3 * kFeaturesPerChannel + kFeatMax] == 6.0);
}

TEST_CASE("non-finite samples name the channel and index") {
    LabeledWindow w;
    w.label = {0, "eating"};
    w.channels = ChannelMatrix::Zero(4, kChannelCount);
    w.channels(2, 4) = std::numeric_limits<double>::quiet_NaN();
    try {
        extract_features(w);
        FAIL("expected ComputationError");
    } catch (const ComputationError& e) {
        CHECK(std::string(e.what()).find("gy") != std::string::npos);
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("shift and scale behave as the formulas demand") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 50 + static_cast<int>(rng.uniform_index(200));
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = rng.normal(0.0, 2.0) + rng.uniform();
        const double c = rng.uniform(-5.0, 5.0);
        const double s = rng.uniform(0.1, 4.0);

        std::vector<double> shifted(x), scaled(x);
        for (auto& v : shifted) v += c;
        for (auto& v : scaled) v *= s;

        const FeatureVector f0 = extract_features(uniform_window(x));
        const FeatureVector fc = extract_features(uniform_window(shifted));
        const FeatureVector fs = extract_features(uniform_window(scaled));

        CHECK(std::abs(fc[kFeatMean] - (f0[kFeatMean] + c)) <= 1e-9);
        CHECK(std::abs(fc[kFeatMax] - (f0[kFeatMax] + c)) <= 1e-9);
        CHECK(std::abs(fc[kFeatMin] - (f0[kFeatMin] + c)) <= 1e-9);
        CHECK(std::abs(fc[kFeatVariance] - f0[kFeatVariance]) <= 1e-9);
        CHECK(std::abs(fc[kFeatSkewness] - f0[kFeatSkewness]) <= 1e-7);
        CHECK(std::abs(fc[kFeatKurtosis] - f0[kFeatKurtosis]) <= 1e-7);
        CHECK(fc[kFeatZcr] == f0[kFeatZcr]);

        CHECK(std::abs(fs[kFeatVariance] - s * s * f0[kFeatVariance]) <= 1e-9 * s * s);
        CHECK(std::abs(fs[kFeatEnergy] - s * s * f0[kFeatEnergy]) <= 1e-9 * s * s);
        CHECK(std::abs(fs[kFeatSkewness] - f0[kFeatSkewness]) <= 1e-7);
        CHECK(std::abs(fs[kFeatKurtosis] - f0[kFeatKurtosis]) <= 1e-7);
        CHECK(fs[kFeatZcr] == f0[kFeatZcr]);

        // Order statistics and simplex-style bounds.
        CHECK(f0[kFeatMin] <= f0[kFeatMean]);
        CHECK(f0[kFeatMean] <= f0[kFeatMax]);
        CHECK(f0[kFeatVariance] >= 0.0);
        CHECK(f0[kFeatZcr] >= 0.0);
        CHECK(f0[kFeatZcr] <= 1.0);
    }
}

TEST_CASE("feature dump carries the documented header") {
    std::vector<LabeledWindow> windows = {uniform_window({1, 2, 3, 4})};
    windows[0].session_id = "s1";
    windows[0].subject_id = "alice";
    TempDir dir;
    write_feature_csv(windows, dir.file("features.csv"));
    const std::string text = read_file(dir.file("features.csv"));
    CHECK(text.find("session_id,subject_id,start_ms,label,f00,f01") == 0);
    CHECK(text.find("f53") != std::string::npos);
    CHECK(text.find("s1,alice,0,eating,2.5,1.25,4,1,") != std::string::npos);
}
