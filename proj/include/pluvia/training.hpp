#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "pluvia/dataset.hpp"
#include "pluvia/model.hpp"

namespace pluvia {

/// Huber loss of the residual r = yhat - y:
/// r^2/2 for |r| <= delta, delta*(|r| - delta/2) beyond.
inline double huber_loss(double y, double yhat, double delta) {
    if (!(delta > 0.0)) throw ParameterError("huber delta must be positive");
    const double r = yhat - y;
    const double a = std::fabs(r);
    if (a <= delta) return 0.5 * r * r;
    return delta * (a - 0.5 * delta);
}

/// d(loss)/d(yhat): the residual clipped to [-delta, delta].
inline double huber_grad(double y, double yhat, double delta) {
    if (!(delta > 0.0)) throw ParameterError("huber delta must be positive");
    const double r = yhat - y;
    if (r > delta) return delta;
    if (r < -delta) return -delta;
    return r;
}

/// Staircase schedule rate(e) = initial * factor^floor(e / period), e
/// zero-indexed. factor 1 gives a constant rate.
struct LrSchedule {
    double initial = 1e-8;
    double factor = 10.0;
    std::size_t period_epochs = 20;
};

inline double lr_at_epoch(const LrSchedule& s, std::size_t epoch) {
    if (s.period_epochs == 0) throw ParameterError("lr schedule period must be >= 1");
    return s.initial * std::pow(s.factor, static_cast<double>(epoch / s.period_epochs));
}

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First/second moment estimates per parameter tensor plus the shared step
/// counter; t increments once per adam_step call.
struct AdamState {
    std::vector<Tensor> m;
    std::vector<Tensor> v;
    std::uint64_t t = 0;
};

inline AdamState init_adam_state(const std::vector<std::pair<std::string, Tensor*>>& params) {
    AdamState state;
    state.m.reserve(params.size());
    state.v.reserve(params.size());
    for (const auto& [name, p] : params) {
        state.m.emplace_back(p->shape());
        state.v.emplace_back(p->shape());
    }
    return state;
}

/// One bias-corrected Adam update applied to every parameter tensor, in the
/// order given: theta -= lr * mhat / (sqrt(vhat) + eps).
inline void adam_step(const std::vector<std::pair<std::string, Tensor*>>& params,
                      const std::vector<Tensor>& grads, AdamState& state, double lr,
                      const AdamConfig& cfg = {}) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw DimensionError("adam_step: parameter/gradient/state count mismatch");
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t p = 0; p < params.size(); ++p) {
        Tensor& theta = *params[p].second;
        const Tensor& g = grads[p];
        Tensor& m = state.m[p];
        Tensor& v = state.v[p];
        if (!theta.same_shape(g)) {
            throw DimensionError("adam_step: gradient shape " + g.shape_string() +
                                 " does not match parameter " + params[p].first + " " +
                                 theta.shape_string());
        }
        for (std::size_t i = 0; i < theta.numel(); ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            theta[i] -= lr * mhat / (std::sqrt(vhat) + cfg.epsilon);
        }
    }
}

/// Reference training parameters: Huber loss, Adam, staircase schedule
/// (1e-8 rising 10x every 20 epochs), batch 256, window 64, 50 epochs.
struct TrainingConfig {
    double huber_delta = 1.0;
    AdamConfig adam;
    LrSchedule schedule;
    std::size_t batch_size = 256;
    std::size_t window_size = 64;
    std::size_t epochs = 50;
    std::uint64_t seed = 42;
    bool shuffle = true;
    /// Score every timestep of the output sequence instead of only the final
    /// forecast. Per-timestep targets are the window shifted by one month.
    bool sequence_loss = false;
};

struct EpochStats {
    std::size_t epoch = 0;
    double mean_loss = 0.0;
    double lr = 0.0;
    double seconds = 0.0;
};

using TrainingHistory = std::vector<EpochStats>;

inline void validate_training_config(const TrainingConfig& cfg) {
    if (cfg.batch_size < 1) throw ParameterError("batch_size must be >= 1");
    if (cfg.epochs < 1) throw ParameterError("epochs must be >= 1");
    if (!(cfg.huber_delta > 0.0)) throw ParameterError("huber_delta must be positive");
    if (cfg.schedule.period_epochs == 0) throw ParameterError("lr schedule period must be >= 1");
}

/// Minibatch training loop. Each epoch shuffles the windows (seeded), walks
/// batches of batch_size (final partial batch included), averages the Huber
/// loss gradient over the batch and applies one Adam step at the epoch's
/// scheduled rate. Deterministic given (model, dataset, config).
inline TrainingHistory train(CnnLstmModel& model, const WindowedDataset& dataset,
                             const TrainingConfig& cfg, std::ostream* progress = nullptr) {
    validate_training_config(cfg);
    if (dataset.windows.empty()) throw DataError("training requires a non-empty dataset");
    if (dataset.window_size != model.config.window_size) {
        throw DimensionError("training: dataset window size " +
                             std::to_string(dataset.window_size) + " does not match model window " +
                             std::to_string(model.config.window_size));
    }
    if (cfg.window_size != model.config.window_size) {
        throw DimensionError("training: config window size " + std::to_string(cfg.window_size) +
                             " does not match model window " +
                             std::to_string(model.config.window_size));
    }

    auto params = parameters(model);
    AdamState adam = init_adam_state(params);
    // Shuffle stream is derived from the config seed; model init has its own.
    Rng shuffle_rng(cfg.seed + 1);

    const std::size_t n = dataset.windows.size();
    const std::size_t out_rows = model.config.lstm2_return_sequences ? cfg.window_size : 1;

    TrainingHistory history;
    history.reserve(cfg.epochs);

    WindowedDataset epoch_ds = dataset;
    std::vector<Tensor> grad_sum;
    ModelCache cache;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        if (cfg.shuffle) epoch_ds = shuffle_windows(epoch_ds, shuffle_rng);
        const double lr = lr_at_epoch(cfg.schedule, epoch);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(n, start + cfg.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(end - start);

            grad_sum.assign(params.size(), Tensor());
            for (std::size_t p = 0; p < params.size(); ++p) {
                grad_sum[p] = Tensor(params[p].second->shape());
            }

            double batch_loss = 0.0;
            for (std::size_t w = start; w < end; ++w) {
                const Window& win = epoch_ds.windows[w];
                const Tensor out = model_forward_cached(model, win.input, cache);
                Tensor grad_out({out_rows, 1});
                double loss_w = 0.0;
                if (!cfg.sequence_loss) {
                    const double yhat = out[out_rows - 1];
                    loss_w = huber_loss(win.target_mm, yhat, cfg.huber_delta);
                    grad_out[out_rows - 1] =
                        huber_grad(win.target_mm, yhat, cfg.huber_delta) * inv_batch;
                } else {
                    // Target for timestep t is the next month's value: the
                    // window shifted left by one, closed by the window target.
                    const double inv_rows = 1.0 / static_cast<double>(out_rows);
                    for (std::size_t t = 0; t < out_rows; ++t) {
                        const double target = t + 1 < cfg.window_size
                                                  ? win.input[t + 1] * dataset.scale
                                                  : win.target_mm;
                        loss_w += huber_loss(target, out[t], cfg.huber_delta) * inv_rows;
                        grad_out[t] = huber_grad(target, out[t], cfg.huber_delta) * inv_rows *
                                      inv_batch;
                    }
                }
                batch_loss += loss_w;
                const std::vector<Tensor> grads = model_backward(model, cache, grad_out);
                for (std::size_t p = 0; p < grads.size(); ++p) {
                    Tensor& acc = grad_sum[p];
                    const Tensor& g = grads[p];
                    for (std::size_t i = 0; i < acc.numel(); ++i) acc[i] += g[i];
                }
            }

            if (!std::isfinite(batch_loss)) {
                throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) +
                                   ", batch starting at window " + std::to_string(start));
            }
            loss_sum += batch_loss;
            adam_step(params, grad_sum, adam, lr, cfg.adam);
        }

        const auto t1 = std::chrono::steady_clock::now();
        EpochStats stats;
        stats.epoch = epoch;
        stats.mean_loss = loss_sum / static_cast<double>(n);
        stats.lr = lr;
        stats.seconds = std::chrono::duration<double>(t1 - t0).count();
        history.push_back(stats);
        if (progress) {
            (*progress) << stats.epoch << "," << stats.mean_loss << "," << stats.lr << ","
                        << stats.seconds << "\n";
        }
    }
    return history;
}

}  // namespace pluvia
