#include "corrohar/simulator.hpp"

#include <algorithm>
#include <map>

#include "corrohar/rng.hpp"

namespace corrohar {

void SimConfig::validate() const {
    window.validate();
    if (tick_period_ms != window.stride_ms()) {
        throw ConfigError("tick period (" + std::to_string(tick_period_ms) +
                          " ms) must equal the window stride (" +
                          std::to_string(window.stride_ms()) + " ms)");
    }
    if (network.drop_probability < 0.0 || network.drop_probability > 1.0) {
        throw ConfigError("drop_probability must be in [0, 1]");
    }
    if (network.latency_ms < 0) throw ConfigError("latency_ms must be non-negative");
    if (staleness_ms < 0) throw ConfigError("staleness_ms must be non-negative");
}

namespace {

struct PendingDelivery {
    std::int64_t arrival_ms;
    std::size_t sender;
    std::size_t receiver;
    ProbabilityVector pv;
};

}  // namespace

SessionTrace run_session(const Session& session, const BackboneModel& model,
                         const SimConfig& cfg) {
    cfg.validate();
    if (session.streams.empty()) {
        throw SimulationError("session " + session.session_id + " has no streams");
    }

    const int truth_id = model.labels().id(session.activity.name);
    if (truth_id < 0) {
        throw ConfigError("model labels do not cover activity '" + session.activity.name + "'");
    }
    const ActivityLabel truth = model.labels().label(truth_id);

    const std::size_t n_devices = session.streams.size();
    std::vector<DeviceState> devices;
    std::vector<std::map<std::int64_t, LabeledWindow>> windows_by_tick(n_devices);
    devices.reserve(n_devices);

    for (std::size_t d = 0; d < n_devices; ++d) {
        const SubjectStream repaired = repair_gaps(session.streams[d], cfg.max_gap_ms);
        for (auto& w : make_windows(repaired, cfg.window, truth, session.session_id)) {
            const std::int64_t tick = w.end_ms;
            windows_by_tick[d].emplace(tick, std::move(w));
        }
        devices.emplace_back(session.streams[d].subject_id, &model, cfg.aggregation,
                             cfg.staleness_ms);
    }

    std::vector<std::int64_t> ticks;
    for (const auto& per_device : windows_by_tick) {
        for (const auto& [tick, w] : per_device) ticks.push_back(tick);
    }
    std::sort(ticks.begin(), ticks.end());
    ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());

    const std::uint64_t loss_seed = derive_seed(cfg.network.seed, session.session_id);

    SessionTrace trace;
    trace.session_id = session.session_id;
    trace.truth = truth;
    trace.devices.resize(n_devices);
    for (std::size_t d = 0; d < n_devices; ++d) {
        trace.devices[d].device_id = session.streams[d].subject_id;
    }

    std::vector<PendingDelivery> pending;
    std::vector<std::pair<std::size_t, ProbabilityVector>> locals;

    for (std::size_t tick_index = 0; tick_index < ticks.size(); ++tick_index) {
        const std::int64_t now = ticks[tick_index];

        // Phase 1: every device with a fresh window runs its local model.
        locals.clear();
        for (std::size_t d = 0; d < n_devices; ++d) {
            const auto it = windows_by_tick[d].find(now);
            if (it == windows_by_tick[d].end()) continue;
            locals.emplace_back(d, devices[d].local_infer(it->second, now));
        }

        // Phase 2: deliveries. In-flight messages land first, stamped with
        // their true arrival time; latest-wins resolves any overlap with
        // this tick's broadcasts.
        std::stable_sort(pending.begin(), pending.end(),
                         [](const PendingDelivery& a, const PendingDelivery& b) {
                             return a.arrival_ms < b.arrival_ms;
                         });
        std::size_t delivered = 0;
        while (delivered < pending.size() && pending[delivered].arrival_ms <= now) {
            auto& msg = pending[delivered];
            devices[msg.receiver].receive(msg.pv, msg.arrival_ms);
            ++delivered;
        }
        pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(delivered));

        for (const auto& [sender, pv] : locals) {
            for (std::size_t receiver = 0; receiver < n_devices; ++receiver) {
                if (receiver == sender) continue;
                if (cfg.network.drop_probability > 0.0) {
                    // One independent draw per (tick, sender, receiver).
                    const std::uint64_t counter =
                        (tick_index * n_devices + sender) * n_devices + receiver;
                    Rng link(derive_seed(loss_seed, "drop", counter));
                    if (link.uniform() < cfg.network.drop_probability) continue;
                }
                const std::int64_t arrival = now + cfg.network.latency_ms;
                if (arrival <= now) {
                    devices[receiver].receive(pv, arrival);
                } else {
                    pending.push_back({arrival, sender, receiver, pv});
                }
            }
        }

        // Phase 3: aggregate and record.
        for (const auto& [d, pv] : locals) {
            trace.devices[d].decisions.push_back(devices[d].aggregate(pv, now));
        }
    }
    return trace;
}

std::vector<SessionTrace> run_experiment(const std::vector<Session>& sessions,
                                         const BackboneModel& model, const SimConfig& cfg) {
    cfg.validate();
    for (const auto& session : sessions) {
        if (model.labels().id(session.activity.name) < 0) {
            throw ConfigError("model labels do not cover activity '" + session.activity.name +
                              "'");
        }
    }
    std::vector<SessionTrace> traces;
    traces.reserve(sessions.size());
    for (const auto& session : sessions) {
        traces.push_back(run_session(session, model, cfg));
    }
    return traces;
}

}  // namespace corrohar
