#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pluvia/csv.hpp"
#include "pluvia/model.hpp"
#include "pluvia/training.hpp"

namespace pluvia {

constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
    int format_version = kCheckpointFormatVersion;
    CnnLstmModel model;
    TrainingConfig training;
    std::uint64_t seed = 0;
};

/// The checkpoint is one self-describing JSON document. Emission is
/// hand-rolled with a fixed key order and 17-significant-digit numbers, so
/// save -> load -> save is byte-identical.
inline std::string checkpoint_to_json(const Checkpoint& cp) {
    const ModelConfig& mc = cp.model.config;
    const TrainingConfig& tc = cp.training;
    std::ostringstream os;
    os << "{\n";
    os << "  \"format_version\": " << cp.format_version << ",\n";
    os << "  \"model\": {\n";
    os << "    \"window_size\": " << mc.window_size << ",\n";
    os << "    \"conv_filters\": " << mc.conv_filters << ",\n";
    os << "    \"kernel_size\": " << mc.kernel_size << ",\n";
    os << "    \"lstm1_units\": " << mc.lstm1_units << ",\n";
    os << "    \"lstm2_units\": " << mc.lstm2_units << ",\n";
    os << "    \"lstm2_return_sequences\": " << (mc.lstm2_return_sequences ? "true" : "false")
       << ",\n";
    os << "    \"dense1_units\": " << mc.dense1_units << ",\n";
    os << "    \"dense2_units\": " << mc.dense2_units << ",\n";
    os << "    \"output_scale\": " << fmt_g17(mc.output_scale) << "\n";
    os << "  },\n";
    os << "  \"training\": {\n";
    os << "    \"loss\": \"huber\",\n";
    os << "    \"huber_delta\": " << fmt_g17(tc.huber_delta) << ",\n";
    os << "    \"optimizer\": \"adam\",\n";
    os << "    \"beta1\": " << fmt_g17(tc.adam.beta1) << ",\n";
    os << "    \"beta2\": " << fmt_g17(tc.adam.beta2) << ",\n";
    os << "    \"epsilon\": " << fmt_g17(tc.adam.epsilon) << ",\n";
    os << "    \"lr_initial\": " << fmt_g17(tc.schedule.initial) << ",\n";
    os << "    \"lr_factor\": " << fmt_g17(tc.schedule.factor) << ",\n";
    os << "    \"lr_period_epochs\": " << tc.schedule.period_epochs << ",\n";
    os << "    \"batch_size\": " << tc.batch_size << ",\n";
    os << "    \"window_size\": " << tc.window_size << ",\n";
    os << "    \"epochs\": " << tc.epochs << ",\n";
    os << "    \"shuffle\": " << (tc.shuffle ? "true" : "false") << ",\n";
    os << "    \"sequence_loss\": " << (tc.sequence_loss ? "true" : "false") << "\n";
    os << "  },\n";
    os << "  \"seed\": " << cp.seed << ",\n";
    os << "  \"params\": [\n";
    const auto params = parameters(cp.model);
    for (std::size_t p = 0; p < params.size(); ++p) {
        const auto& [name, tensor] = params[p];
        os << "    {\"name\": \"" << name << "\", \"shape\": [";
        for (std::size_t d = 0; d < tensor->rank(); ++d) {
            if (d) os << ", ";
            os << tensor->dim(d);
        }
        os << "], \"data\": [";
        for (std::size_t i = 0; i < tensor->numel(); ++i) {
            if (i) os << ", ";
            os << fmt_g17((*tensor)[i]);
        }
        os << "]}";
        os << (p + 1 < params.size() ? ",\n" : "\n");
    }
    os << "  ]\n";
    os << "}\n";
    return os.str();
}

inline Checkpoint checkpoint_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("checkpoint: invalid JSON: ") + e.what());
    }
    try {
        Checkpoint cp;
        cp.format_version = j.at("format_version").get<int>();
        if (cp.format_version != kCheckpointFormatVersion) {
            throw DataError("checkpoint: unsupported format_version " +
                            std::to_string(cp.format_version));
        }
        const auto& jm = j.at("model");
        ModelConfig mc;
        mc.window_size = jm.at("window_size").get<std::size_t>();
        mc.conv_filters = jm.at("conv_filters").get<std::size_t>();
        mc.kernel_size = jm.at("kernel_size").get<std::size_t>();
        mc.lstm1_units = jm.at("lstm1_units").get<std::size_t>();
        mc.lstm2_units = jm.at("lstm2_units").get<std::size_t>();
        mc.lstm2_return_sequences = jm.at("lstm2_return_sequences").get<bool>();
        mc.dense1_units = jm.at("dense1_units").get<std::size_t>();
        mc.dense2_units = jm.at("dense2_units").get<std::size_t>();
        mc.output_scale = jm.at("output_scale").get<double>();
        if (!(mc.output_scale > 0.0)) {
            throw DataError("checkpoint: output_scale must be positive");
        }

        const auto& jt = j.at("training");
        TrainingConfig tc;
        tc.huber_delta = jt.at("huber_delta").get<double>();
        tc.adam.beta1 = jt.at("beta1").get<double>();
        tc.adam.beta2 = jt.at("beta2").get<double>();
        tc.adam.epsilon = jt.at("epsilon").get<double>();
        tc.schedule.initial = jt.at("lr_initial").get<double>();
        tc.schedule.factor = jt.at("lr_factor").get<double>();
        tc.schedule.period_epochs = jt.at("lr_period_epochs").get<std::size_t>();
        tc.batch_size = jt.at("batch_size").get<std::size_t>();
        tc.window_size = jt.at("window_size").get<std::size_t>();
        tc.epochs = jt.at("epochs").get<std::size_t>();
        tc.shuffle = jt.at("shuffle").get<bool>();
        tc.sequence_loss = jt.at("sequence_loss").get<bool>();
        cp.training = tc;
        cp.seed = j.at("seed").get<std::uint64_t>();

        cp.model = build_model(mc, cp.seed);
        auto params = parameters(cp.model);
        const auto& jp = j.at("params");
        if (!jp.is_array() || jp.size() != params.size()) {
            throw DataError("checkpoint: expected " + std::to_string(params.size()) +
                            " parameter tensors");
        }
        for (std::size_t p = 0; p < params.size(); ++p) {
            const auto& entry = jp.at(p);
            const std::string name = entry.at("name").get<std::string>();
            if (name != params[p].first) {
                throw DataError("checkpoint: parameter " + std::to_string(p) + " is '" + name +
                                "', expected '" + params[p].first + "'");
            }
            Tensor& t = *params[p].second;
            const auto& shape = entry.at("shape");
            if (shape.size() != t.rank()) {
                throw DataError("checkpoint: rank mismatch for " + name);
            }
            for (std::size_t d = 0; d < t.rank(); ++d) {
                if (shape.at(d).get<std::size_t>() != t.dim(d)) {
                    throw DataError("checkpoint: shape mismatch for " + name);
                }
            }
            const auto& data = entry.at("data");
            if (data.size() != t.numel()) {
                throw DataError("checkpoint: data length mismatch for " + name);
            }
            for (std::size_t i = 0; i < t.numel(); ++i) t[i] = data.at(i).get<double>();
        }
        return cp;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("checkpoint: missing or malformed field: ") + e.what());
    }
}

inline void save_checkpoint(const std::string& path, const Checkpoint& cp) {
    write_text_file(path, checkpoint_to_json(cp));
}

inline Checkpoint load_checkpoint(const std::string& path) {
    return checkpoint_from_json(read_text_file(path));
}

}  // namespace pluvia
