#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>

#include "corrohar/forest.hpp"
#include "corrohar/windows.hpp"

namespace corrohar {

// The wire payload: one device's per-activity likelihoods at one tick.
struct ProbabilityVector {
    std::string device_id;
    std::int64_t tick_ms = 0;
    Eigen::VectorXd probs;
};

// JSON broadcast encoding: {"device_id": ..., "tick_ms": ..., "probs": [...]}.
std::string to_wire_json(const ProbabilityVector& pv);
ProbabilityVector from_wire_json(const std::string& json_text);

enum class Aggregation { mean, weighted_mean, majority_vote };

struct AggregationPolicy {
    Aggregation kind = Aggregation::mean;
    double local_weight = 0.5;  // α of the weighted-mean strategy
};

// Lowest index wins ties.
int argmax_label(const Eigen::Ref<const Eigen::VectorXd>& probs);

struct Decision {
    std::int64_t tick_ms = 0;
    int standalone_label = -1;
    int corroborated_label = -1;
    Eigen::VectorXd standalone_probs;
    Eigen::VectorXd corroborated_probs;
    int n_neighbors_used = 0;
};

// Device-side protocol state: run the local model, keep the freshest vector
// per neighbor, fold the two together each tick.
class DeviceState {
public:
    DeviceState(std::string device_id, const BackboneModel* model,
                AggregationPolicy policy = {}, std::int64_t staleness_ms = 5000)
        : device_id_(std::move(device_id)),
          model_(model),
          policy_(policy),
          staleness_ms_(staleness_ms) {}

    const std::string& device_id() const { return device_id_; }
    std::int64_t staleness_ms() const { return staleness_ms_; }
    std::size_t inbox_size() const { return inbox_.size(); }

    // Features + backbone on this device's own window; stamped with the tick.
    ProbabilityVector local_infer(const LabeledWindow& window, std::int64_t tick_ms) const;

    // Latest-wins per neighbor: the stored vector is replaced only by a
    // strictly newer tick. ProtocolError on a self-message or a vector of the
    // wrong dimensionality.
    void receive(const ProbabilityVector& pv, std::int64_t now_ms);

    // Folds the local vector with every neighbor vector no older than
    // staleness_ms. With no eligible neighbor the corroborated result equals
    // the standalone one under every strategy.
    Decision aggregate(const ProbabilityVector& local, std::int64_t now_ms) const;

private:
    struct InboxEntry {
        ProbabilityVector pv;
        std::int64_t receipt_ms = 0;
    };

    std::string device_id_;
    const BackboneModel* model_;
    AggregationPolicy policy_;
    std::int64_t staleness_ms_;
    std::map<std::string, InboxEntry> inbox_;  // ordered for deterministic iteration
};

}  // namespace corrohar
