#include "corrohar/corroboration.hpp"

#include <json.hpp>

#include "corrohar/features.hpp"

namespace corrohar {

std::string to_wire_json(const ProbabilityVector& pv) {
    nlohmann::json j;
    j["device_id"] = pv.device_id;
    j["tick_ms"] = pv.tick_ms;
    j["probs"] = std::vector<double>(pv.probs.data(), pv.probs.data() + pv.probs.size());
    return j.dump();
}

ProbabilityVector from_wire_json(const std::string& json_text) {
    try {
        const auto j = nlohmann::json::parse(json_text);
        ProbabilityVector pv;
        pv.device_id = j.at("device_id").get<std::string>();
        pv.tick_ms = j.at("tick_ms").get<std::int64_t>();
        const auto probs = j.at("probs").get<std::vector<double>>();
        pv.probs = Eigen::Map<const Eigen::VectorXd>(probs.data(),
                                                     static_cast<Eigen::Index>(probs.size()));
        return pv;
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("invalid broadcast payload: ") + e.what());
    }
}

int argmax_label(const Eigen::Ref<const Eigen::VectorXd>& probs) {
    int best = 0;
    for (int i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[best]) best = i;
    }
    return best;
}

ProbabilityVector DeviceState::local_infer(const LabeledWindow& window,
                                           std::int64_t tick_ms) const {
    ProbabilityVector pv;
    pv.device_id = device_id_;
    pv.tick_ms = tick_ms;
    pv.probs = model_->predict_proba(extract_features(window));
    return pv;
}

void DeviceState::receive(const ProbabilityVector& pv, std::int64_t now_ms) {
    if (pv.device_id == device_id_) {
        throw ProtocolError("device " + device_id_ + " received its own broadcast");
    }
    if (pv.probs.size() != model_->labels().size()) {
        throw ProtocolError("broadcast from " + pv.device_id + " has " +
                            std::to_string(pv.probs.size()) + " activities, expected " +
                            std::to_string(model_->labels().size()));
    }
    auto it = inbox_.find(pv.device_id);
    if (it == inbox_.end()) {
        inbox_.emplace(pv.device_id, InboxEntry{pv, now_ms});
    } else if (pv.tick_ms > it->second.pv.tick_ms) {
        it->second = InboxEntry{pv, now_ms};
    }
}

Decision DeviceState::aggregate(const ProbabilityVector& local, std::int64_t now_ms) const {
    Decision d;
    d.tick_ms = local.tick_ms;
    d.standalone_probs = local.probs;
    d.standalone_label = argmax_label(local.probs);

    std::vector<const Eigen::VectorXd*> eligible;
    for (const auto& [id, entry] : inbox_) {
        if (now_ms - entry.receipt_ms <= staleness_ms_) eligible.push_back(&entry.pv.probs);
    }
    d.n_neighbors_used = static_cast<int>(eligible.size());

    switch (policy_.kind) {
        case Aggregation::mean: {
            Eigen::VectorXd sum = local.probs;
            for (const auto* p : eligible) sum += *p;
            d.corroborated_probs = sum / static_cast<double>(1 + eligible.size());
            break;
        }
        case Aggregation::weighted_mean: {
            if (eligible.empty()) {
                d.corroborated_probs = local.probs;
            } else {
                Eigen::VectorXd neighbor_mean = Eigen::VectorXd::Zero(local.probs.size());
                for (const auto* p : eligible) neighbor_mean += *p;
                neighbor_mean /= static_cast<double>(eligible.size());
                d.corroborated_probs = policy_.local_weight * local.probs +
                                       (1.0 - policy_.local_weight) * neighbor_mean;
            }
            break;
        }
        case Aggregation::majority_vote: {
            Eigen::VectorXd votes = Eigen::VectorXd::Zero(local.probs.size());
            votes[argmax_label(local.probs)] += 1.0;
            for (const auto* p : eligible) votes[argmax_label(*p)] += 1.0;
            d.corroborated_probs = votes / static_cast<double>(1 + eligible.size());
            break;
        }
    }
    d.corroborated_label = argmax_label(d.corroborated_probs);
    return d;
}

}  // namespace corrohar
