#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "corrohar/dataset.hpp"
#include "corrohar/evaluation.hpp"
#include "corrohar/features.hpp"
#include "corrohar/forest.hpp"
#include "corrohar/pipeline.hpp"
#include "corrohar/simulator.hpp"
#include "corrohar/synthetic.hpp"
#include "corrohar/trace_io.hpp"

namespace {

using namespace corrohar;

// Everything a run needs, assembled from config-file sections with flag
// overrides on top. One top-level seed fans out to every stage.
struct RunConfig {
    LabelDictionary labels = gws_labels();
    SyntheticConfig synthetic = default_synthetic_config();
    WindowSpec window;
    ForestConfig forest;
    SmoteConfig smote;
    double test_fraction = 0.2;
    SplitMode split_mode = SplitMode::window;
    SimConfig sim;
    std::uint64_t seed = 0;
};

SplitMode parse_split_mode(const std::string& s) {
    if (s == "window") return SplitMode::window;
    if (s == "session") return SplitMode::session;
    throw ConfigError("unknown split mode: " + s);
}

Aggregation parse_aggregation(const std::string& s) {
    if (s == "mean") return Aggregation::mean;
    if (s == "weighted") return Aggregation::weighted_mean;
    if (s == "vote") return Aggregation::majority_vote;
    throw ConfigError("unknown aggregation strategy: " + s);
}

RunConfig load_run_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) {
        cfg.sim.tick_period_ms = cfg.window.stride_ms();
        return cfg;
    }

    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }

    try {
        if (doc.contains("labels")) {
            cfg.labels = LabelDictionary(doc["labels"].get<std::vector<std::string>>());
        }
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();

        // The synthetic section mirrors SyntheticConfig; a config file that
        // is nothing but a synthetic document also works.
        const bool bare_synthetic = doc.contains("archetypes") ||
                                    doc.contains("devices_per_session") ||
                                    doc.contains("sessions_per_activity") ||
                                    doc.contains("session_length_s");
        nlohmann::json synth = doc.contains("synthetic") ? doc["synthetic"]
                               : bare_synthetic ? doc
                                                : nlohmann::json::object();
        if (!synth.contains("labels") && doc.contains("labels")) synth["labels"] = doc["labels"];
        if (!synth.contains("seed") && doc.contains("seed")) synth["seed"] = doc["seed"];
        if (!synth.empty()) cfg.synthetic = parse_synthetic_config(synth.dump());

        if (doc.contains("window")) {
            const auto& w = doc["window"];
            if (w.contains("length_s")) cfg.window.length_s = w["length_s"].get<double>();
            if (w.contains("stride_s")) cfg.window.stride_s = w["stride_s"].get<double>();
        }
        if (doc.contains("forest")) {
            const auto& f = doc["forest"];
            if (f.contains("n_trees")) cfg.forest.n_trees = f["n_trees"].get<int>();
            if (f.contains("min_samples_split")) {
                cfg.forest.min_samples_split = f["min_samples_split"].get<int>();
            }
            if (f.contains("max_features")) {
                const auto s = f["max_features"].get<std::string>();
                if (s == "sqrt") {
                    cfg.forest.max_features = FeatureSampling::sqrt_total;
                } else if (s == "all") {
                    cfg.forest.max_features = FeatureSampling::all;
                } else {
                    throw ConfigError("unknown max_features strategy: " + s);
                }
            }
            if (f.contains("bootstrap")) cfg.forest.bootstrap = f["bootstrap"].get<bool>();
        }
        if (doc.contains("smote")) {
            const auto& s = doc["smote"];
            if (s.contains("k_neighbors")) cfg.smote.k_neighbors = s["k_neighbors"].get<int>();
        }
        if (doc.contains("split")) {
            const auto& s = doc["split"];
            if (s.contains("mode")) cfg.split_mode = parse_split_mode(s["mode"].get<std::string>());
            if (s.contains("test_fraction")) {
                cfg.test_fraction = s["test_fraction"].get<double>();
            }
        }
        if (doc.contains("sim")) {
            const auto& s = doc["sim"];
            if (s.contains("tick_period_ms")) {
                cfg.sim.tick_period_ms = s["tick_period_ms"].get<std::int64_t>();
            } else {
                cfg.sim.tick_period_ms = cfg.window.stride_ms();
            }
            if (s.contains("staleness_ms")) {
                cfg.sim.staleness_ms = s["staleness_ms"].get<std::int64_t>();
            }
            if (s.contains("max_gap_ms")) cfg.sim.max_gap_ms = s["max_gap_ms"].get<std::int64_t>();
            if (s.contains("aggregation")) {
                cfg.sim.aggregation.kind = parse_aggregation(s["aggregation"].get<std::string>());
            }
            if (s.contains("local_weight")) {
                cfg.sim.aggregation.local_weight = s["local_weight"].get<double>();
            }
            if (s.contains("drop_probability")) {
                cfg.sim.network.drop_probability = s["drop_probability"].get<double>();
            }
            if (s.contains("latency_ms")) {
                cfg.sim.network.latency_ms = s["latency_ms"].get<std::int64_t>();
            }
        } else {
            cfg.sim.tick_period_ms = cfg.window.stride_ms();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return cfg;
}

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--seed", flags.seed, "top-level seed, fans out to every stage")
        ->each([&flags](const std::string&) { flags.seed_given = true; });
}

RunConfig resolve(const CommonFlags& flags) {
    RunConfig cfg = load_run_config(flags.config_path);
    if (flags.seed_given) cfg.seed = flags.seed;
    cfg.synthetic.seed = subseed(cfg.seed, "generate");
    cfg.sim.seed = subseed(cfg.seed, "sim");
    cfg.sim.network.seed = subseed(cfg.seed, "network");
    return cfg;
}

int cmd_generate(const CommonFlags& flags, const std::string& out_dir) {
    const RunConfig cfg = resolve(flags);
    if (cfg.synthetic.session_length_s < cfg.window.length_s) {
        throw ConfigError("session_length_s must cover at least one window");
    }
    const auto sessions = generate_synthetic(cfg.synthetic);
    write_sessions(sessions, out_dir);
    const auto summary = summarize(sessions, cfg.synthetic.labels);
    std::cout << "wrote " << sessions.size() << " session files to " << out_dir << " ("
              << summary.total_hours << " h total)\n";
    return 0;
}

void warn_on_rate_violations(const std::vector<Session>& sessions) {
    int bad = 0;
    for (const auto& session : sessions) {
        for (const auto& stream : session.streams) {
            if (!stream_rate_ok(stream)) ++bad;
        }
    }
    if (bad > 0) {
        std::cerr << "warning: " << bad
                  << " stream(s) deviate more than 20% from the nominal sample rate\n";
    }
}

int cmd_train(const CommonFlags& flags, const std::string& data_dir,
              const std::string& model_out, const std::string& split_flag,
              double test_fraction_flag, const std::string& dump_features) {
    RunConfig cfg = resolve(flags);
    if (!split_flag.empty()) cfg.split_mode = parse_split_mode(split_flag);
    if (test_fraction_flag > 0.0) cfg.test_fraction = test_fraction_flag;

    const auto sessions = load_sessions(data_dir, cfg.labels);
    if (sessions.empty()) throw IoError("no session files in " + data_dir);
    warn_on_rate_violations(sessions);

    if (!dump_features.empty()) {
        write_feature_csv(corpus_windows(sessions, cfg.window, cfg.sim.max_gap_ms),
                          dump_features);
    }

    TrainOptions opt;
    opt.window = cfg.window;
    opt.max_gap_ms = cfg.sim.max_gap_ms;
    opt.test_fraction = cfg.test_fraction;
    opt.split_mode = cfg.split_mode;
    opt.smote = cfg.smote;
    opt.forest = cfg.forest;
    opt.seed = cfg.seed;

    const TrainOutcome outcome = train_pipeline(sessions, cfg.labels, opt);
    save_model(outcome.model, model_out);

    std::cout << "train windows: " << outcome.n_train << " (balanced to "
              << outcome.n_train_balanced << ")\n"
              << "test windows:  " << outcome.n_test << '\n'
              << "held-out standalone accuracy: " << outcome.test_accuracy << '\n'
              << "model written to " << model_out << '\n';
    return 0;
}

int cmd_simulate(const CommonFlags& flags, const std::string& data_dir,
                 const std::string& model_path, const std::string& trace_out,
                 const std::string& aggregation_flag, double drop_prob_flag,
                 std::int64_t latency_flag) {
    RunConfig cfg = resolve(flags);
    if (!aggregation_flag.empty()) {
        cfg.sim.aggregation.kind = parse_aggregation(aggregation_flag);
    }
    if (drop_prob_flag >= 0.0) cfg.sim.network.drop_probability = drop_prob_flag;
    if (latency_flag >= 0) cfg.sim.network.latency_ms = latency_flag;
    cfg.sim.window = cfg.window;

    const RandomForest model = load_model(model_path);
    const auto sessions = load_sessions(data_dir, model.labels());
    if (sessions.empty()) throw IoError("no session files in " + data_dir);
    warn_on_rate_violations(sessions);

    const auto traces = run_experiment(sessions, model, cfg.sim);
    write_traces(traces, model.labels(), trace_out);

    std::size_t decisions = 0;
    for (const auto& t : traces) decisions += t.decision_count();
    std::cout << "wrote " << decisions << " decisions across " << traces.size()
              << " sessions to " << trace_out << '\n';
    return 0;
}

LabelDictionary dictionary_for_traces(const std::string& trace_path,
                                      const std::string& model_path) {
    if (!model_path.empty()) return load_model(model_path).labels();
    return trace_labels(trace_path);
}

int cmd_evaluate(const std::string& trace_path, const std::string& out_prefix,
                 const std::string& model_path) {
    const LabelDictionary dict = dictionary_for_traces(trace_path, model_path);
    const auto traces = read_traces(trace_path, dict);

    const auto standalone = score(traces, PredictionMode::standalone, dict);
    const auto corroborated = score(traces, PredictionMode::corroborated, dict);
    const auto summary = compare(standalone, corroborated);

    write_report_json(standalone, corroborated, summary, dict, out_prefix + ".json");
    write_confusion_csv(standalone, dict, out_prefix + "_confusion_standalone.csv");
    write_confusion_csv(corroborated, dict, out_prefix + "_confusion_corroborated.csv");

    std::cout << "standalone accuracy:   " << standalone.accuracy << '\n'
              << "corroborated accuracy: " << corroborated.accuracy << '\n'
              << "report written to " << out_prefix << ".json\n";
    return 0;
}

int cmd_ablate(const std::string& trace_path, const std::string& out_csv,
               const std::string& model_path) {
    const LabelDictionary dict = dictionary_for_traces(trace_path, model_path);
    const auto traces = read_traces(trace_path, dict);

    const auto standalone = score(traces, PredictionMode::standalone, dict);
    const auto corroborated = score(traces, PredictionMode::corroborated, dict);
    const auto summary = compare(standalone, corroborated);

    std::cout << "mode          accuracy  recall(macro)  precision(macro)\n";
    std::printf("standalone    %.4f    %.4f         %.4f\n", standalone.accuracy,
                standalone.macro_recall, standalone.macro_precision);
    std::printf("corroborated  %.4f    %.4f         %.4f\n", corroborated.accuracy,
                corroborated.macro_recall, corroborated.macro_precision);
    std::printf("gain: %+.4f absolute (%+.2f%% relative)\n", summary.absolute_gain,
                100.0 * summary.relative_gain);

    if (!out_csv.empty()) write_ablation_csv(standalone, corroborated, out_csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corroborated human activity recognition over simulated device groups"};
    app.require_subcommand(1);

    CommonFlags generate_flags, train_flags, simulate_flags;
    std::string out_dir               = "data";
    std::string train_data, train_model = "model.json", train_split, train_dump;
    double train_test_fraction = -1.0;
    std::string sim_data, sim_model, sim_out = "traces.jsonl", sim_aggregation;
    double sim_drop = -1.0;
    std::int64_t sim_latency = -1;
    std::string eval_traces, eval_out = "report", eval_model;
    std::string ablate_traces, ablate_out, ablate_model;

    auto* generate = app.add_subcommand("generate", "synthesize a session corpus");
    add_common(generate, generate_flags);
    generate->add_option("--out", out_dir, "output directory for session CSVs");

    auto* train = app.add_subcommand("train", "train the forest backbone on a corpus");
    add_common(train, train_flags);
    train->add_option("--data", train_data, "directory of session CSVs")->required();
    train->add_option("--out", train_model, "model JSON path");
    train->add_option("--split", train_split, "window|session");
    train->add_option("--test-fraction", train_test_fraction, "held-out fraction");
    train->add_option("--dump-features", train_dump, "write the feature CSV here");

    auto* simulate = app.add_subcommand("simulate", "replay sessions tick by tick");
    add_common(simulate, simulate_flags);
    simulate->add_option("--data", sim_data, "directory of session CSVs")->required();
    simulate->add_option("--model", sim_model, "model JSON path")->required();
    simulate->add_option("--out", sim_out, "trace JSONL path");
    simulate->add_option("--aggregation", sim_aggregation, "mean|weighted|vote");
    simulate->add_option("--drop-prob", sim_drop, "broadcast drop probability");
    simulate->add_option("--latency-ms", sim_latency, "broadcast latency");

    auto* evaluate = app.add_subcommand("evaluate", "score a trace file");
    evaluate->add_option("--traces", eval_traces, "trace JSONL path")->required();
    evaluate->add_option("--out", eval_out, "report prefix");
    evaluate->add_option("--model", eval_model, "model JSON pinning the label set");

    auto* ablate = app.add_subcommand("ablate", "standalone vs corroborated comparison");
    ablate->add_option("--traces", ablate_traces, "trace JSONL path")->required();
    ablate->add_option("--out", ablate_out, "two-row CSV path");
    ablate->add_option("--model", ablate_model, "model JSON pinning the label set");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(generate_flags, out_dir);
        if (train->parsed()) {
            return cmd_train(train_flags, train_data, train_model, train_split,
                             train_test_fraction, train_dump);
        }
        if (simulate->parsed()) {
            return cmd_simulate(simulate_flags, sim_data, sim_model, sim_out, sim_aggregation,
                                sim_drop, sim_latency);
        }
        if (evaluate->parsed()) return cmd_evaluate(eval_traces, eval_out, eval_model);
        if (ablate->parsed()) return cmd_ablate(ablate_traces, ablate_out, ablate_model);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
