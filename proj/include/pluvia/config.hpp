#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pluvia/csv.hpp"
#include "pluvia/model.hpp"
#include "pluvia/training.hpp"

namespace pluvia {

/// End-to-end run settings. Every field has the reference default, so an
/// empty JSON object (or missing fields) gives the reference pipeline.
struct RunConfig {
    std::string data_path;
    SeriesFormat format = SeriesFormat::Long;
    double split_fraction = 0.8;
    bool strict_gap_windows = false;
    ModelConfig model;
    TrainingConfig training;
    std::string output_dir = "out";
};

inline std::vector<std::string> validate_run_config(const RunConfig& cfg) {
    std::vector<std::string> problems;
    if (!(cfg.split_fraction > 0.0 && cfg.split_fraction < 1.0)) {
        problems.push_back("split_fraction must be in (0, 1)");
    }
    if (cfg.model.window_size < 1) problems.push_back("model.window_size must be >= 1");
    if (cfg.model.conv_filters < 1) problems.push_back("model.conv_filters must be >= 1");
    if (cfg.model.kernel_size < 1) problems.push_back("model.kernel_size must be >= 1");
    if (cfg.model.lstm1_units < 1) problems.push_back("model.lstm1_units must be >= 1");
    if (cfg.model.lstm2_units < 1) problems.push_back("model.lstm2_units must be >= 1");
    if (cfg.model.dense1_units < 1) problems.push_back("model.dense1_units must be >= 1");
    if (cfg.model.dense2_units < 1) problems.push_back("model.dense2_units must be >= 1");
    if (cfg.model.output_scale < 0.0) {
        problems.push_back("model.output_scale must be positive (or 0 for auto)");
    }
    if (cfg.training.batch_size < 1) problems.push_back("training.batch_size must be >= 1");
    if (cfg.training.epochs < 1) problems.push_back("training.epochs must be >= 1");
    if (!(cfg.training.huber_delta > 0.0)) problems.push_back("training.huber_delta must be > 0");
    if (!(cfg.training.schedule.initial > 0.0)) problems.push_back("training.lr_initial must be > 0");
    if (!(cfg.training.schedule.factor > 0.0)) problems.push_back("training.lr_factor must be > 0");
    if (cfg.training.schedule.period_epochs < 1) {
        problems.push_back("training.lr_period_epochs must be >= 1");
    }
    if (cfg.training.window_size != cfg.model.window_size) {
        problems.push_back("training.window_size must equal model.window_size");
    }
    return problems;
}

/// Parses a RunConfig JSON document. Unknown keys are rejected and every
/// validation problem is reported in one error.
inline RunConfig run_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    RunConfig cfg;
    std::vector<std::string> problems;

    const auto check_keys = [&problems](const nlohmann::json& obj, const std::string& where,
                                        std::initializer_list<const char*> allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool known = false;
            for (const char* k : allowed) {
                if (it.key() == k) {
                    known = true;
                    break;
                }
            }
            if (!known) problems.push_back("unknown key '" + where + it.key() + "'");
        }
    };

    try {
        check_keys(j, "", {"data", "split_fraction", "strict_gap_windows", "model", "training",
                           "output_dir"});
        if (j.contains("data")) {
            const auto& jd = j.at("data");
            check_keys(jd, "data.", {"path", "format"});
            if (jd.contains("path")) cfg.data_path = jd.at("path").get<std::string>();
            if (jd.contains("format")) {
                const std::string f = jd.at("format").get<std::string>();
                if (f == "wide") {
                    cfg.format = SeriesFormat::Wide;
                } else if (f == "long") {
                    cfg.format = SeriesFormat::Long;
                } else {
                    problems.push_back("data.format must be 'wide' or 'long'");
                }
            }
        }
        if (j.contains("split_fraction")) cfg.split_fraction = j.at("split_fraction").get<double>();
        if (j.contains("strict_gap_windows")) {
            cfg.strict_gap_windows = j.at("strict_gap_windows").get<bool>();
        }
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();

        if (j.contains("model")) {
            const auto& jm = j.at("model");
            check_keys(jm, "model.",
                       {"window_size", "conv_filters", "kernel_size", "lstm1_units", "lstm2_units",
                        "lstm2_return_sequences", "dense1_units", "dense2_units", "output_scale"});
            if (jm.contains("window_size")) {
                cfg.model.window_size = jm.at("window_size").get<std::size_t>();
                cfg.training.window_size = cfg.model.window_size;
            }
            if (jm.contains("conv_filters")) cfg.model.conv_filters = jm.at("conv_filters").get<std::size_t>();
            if (jm.contains("kernel_size")) cfg.model.kernel_size = jm.at("kernel_size").get<std::size_t>();
            if (jm.contains("lstm1_units")) cfg.model.lstm1_units = jm.at("lstm1_units").get<std::size_t>();
            if (jm.contains("lstm2_units")) cfg.model.lstm2_units = jm.at("lstm2_units").get<std::size_t>();
            if (jm.contains("lstm2_return_sequences")) {
                cfg.model.lstm2_return_sequences = jm.at("lstm2_return_sequences").get<bool>();
            }
            if (jm.contains("dense1_units")) cfg.model.dense1_units = jm.at("dense1_units").get<std::size_t>();
            if (jm.contains("dense2_units")) cfg.model.dense2_units = jm.at("dense2_units").get<std::size_t>();
            if (jm.contains("output_scale")) cfg.model.output_scale = jm.at("output_scale").get<double>();
        }
        if (j.contains("training")) {
            const auto& jt = j.at("training");
            check_keys(jt, "training.",
                       {"huber_delta", "beta1", "beta2", "epsilon", "lr_initial", "lr_factor",
                        "lr_period_epochs", "batch_size", "epochs", "seed", "shuffle",
                        "sequence_loss"});
            if (jt.contains("huber_delta")) cfg.training.huber_delta = jt.at("huber_delta").get<double>();
            if (jt.contains("beta1")) cfg.training.adam.beta1 = jt.at("beta1").get<double>();
            if (jt.contains("beta2")) cfg.training.adam.beta2 = jt.at("beta2").get<double>();
            if (jt.contains("epsilon")) cfg.training.adam.epsilon = jt.at("epsilon").get<double>();
            if (jt.contains("lr_initial")) cfg.training.schedule.initial = jt.at("lr_initial").get<double>();
            if (jt.contains("lr_factor")) cfg.training.schedule.factor = jt.at("lr_factor").get<double>();
            if (jt.contains("lr_period_epochs")) {
                cfg.training.schedule.period_epochs = jt.at("lr_period_epochs").get<std::size_t>();
            }
            if (jt.contains("batch_size")) cfg.training.batch_size = jt.at("batch_size").get<std::size_t>();
            if (jt.contains("epochs")) cfg.training.epochs = jt.at("epochs").get<std::size_t>();
            if (jt.contains("seed")) cfg.training.seed = jt.at("seed").get<std::uint64_t>();
            if (jt.contains("shuffle")) cfg.training.shuffle = jt.at("shuffle").get<bool>();
            if (jt.contains("sequence_loss")) cfg.training.sequence_loss = jt.at("sequence_loss").get<bool>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: malformed field: ") + e.what());
    }

    const auto more = validate_run_config(cfg);
    problems.insert(problems.end(), more.begin(), more.end());
    if (!problems.empty()) {
        std::string msg = "config: " + std::to_string(problems.size()) + " problem(s):";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    return run_config_from_json(read_text_file(path));
}

}  // namespace pluvia
