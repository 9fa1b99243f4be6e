#include "corrohar/trace_io.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>

namespace corrohar {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void write_traces(const std::vector<SessionTrace>& traces, const LabelDictionary& dict,
                  const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());

    for (const auto& trace : traces) {
        for (const auto& device : trace.devices) {
            for (const auto& d : device.decisions) {
                nlohmann::json line;
                line["session_id"] = trace.session_id;
                line["device_id"] = device.device_id;
                line["tick_ms"] = d.tick_ms;
                line["truth"] = trace.truth.name;
                line["standalone"] = dict.name(d.standalone_label);
                line["corroborated"] = dict.name(d.corroborated_label);
                line["standalone_probs"] = to_std(d.standalone_probs);
                line["corroborated_probs"] = to_std(d.corroborated_probs);
                line["n_neighbors_used"] = d.n_neighbors_used;
                out << line.dump() << '\n';
            }
        }
    }
}

std::vector<SessionTrace> read_traces(const std::filesystem::path& path,
                                      const LabelDictionary& dict) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::vector<SessionTrace> traces;
    std::map<std::string, std::size_t> session_index;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": invalid trace line: " + e.what());
        }
        try {
            const auto session_id = j.at("session_id").get<std::string>();
            auto [sit, inserted] = session_index.emplace(session_id, traces.size());
            if (inserted) {
                traces.push_back({session_id,
                                  dict.label(dict.require(j.at("truth").get<std::string>())),
                                  {}});
            }
            SessionTrace& trace = traces[sit->second];

            const auto device_id = j.at("device_id").get<std::string>();
            auto dit = std::find_if(trace.devices.begin(), trace.devices.end(),
                                    [&](const DeviceTrace& d) { return d.device_id == device_id; });
            if (dit == trace.devices.end()) {
                trace.devices.push_back({device_id, {}});
                dit = trace.devices.end() - 1;
            }

            Decision d;
            d.tick_ms = j.at("tick_ms").get<std::int64_t>();
            d.standalone_label = dict.require(j.at("standalone").get<std::string>());
            d.corroborated_label = dict.require(j.at("corroborated").get<std::string>());
            d.standalone_probs = to_eigen(j.at("standalone_probs").get<std::vector<double>>());
            d.corroborated_probs =
                to_eigen(j.at("corroborated_probs").get<std::vector<double>>());
            d.n_neighbors_used = j.at("n_neighbors_used").get<int>();
            dit->decisions.push_back(std::move(d));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": invalid trace line: " + e.what());
        }
    }

    for (auto& trace : traces) {
        for (auto& device : trace.devices) {
            std::stable_sort(device.decisions.begin(), device.decisions.end(),
                             [](const Decision& a, const Decision& b) {
                                 return a.tick_ms < b.tick_ms;
                             });
        }
    }
    return traces;
}

LabelDictionary trace_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::set<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            names.insert(j.at("truth").get<std::string>());
            names.insert(j.at("standalone").get<std::string>());
            names.insert(j.at("corroborated").get<std::string>());
        } catch (const nlohmann::json::exception&) {
            continue;  // malformed lines surface in read_traces
        }
    }
    return LabelDictionary(std::vector<std::string>(names.begin(), names.end()));
}

}  // namespace corrohar
