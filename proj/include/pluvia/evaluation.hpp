#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "pluvia/dataset.hpp"
#include "pluvia/model.hpp"

namespace pluvia {

/// Mean squared error (1/n) * sum (y_i - yhat_i)^2.
inline double mse(const std::vector<double>& actual, const std::vector<double>& predicted) {
    if (actual.empty() || actual.size() != predicted.size()) {
        throw MetricError("mse: need equal, nonzero-length series (got " +
                          std::to_string(actual.size()) + " and " +
                          std::to_string(predicted.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double r = actual[i] - predicted[i];
        sum += r * r;
    }
    return sum / static_cast<double>(actual.size());
}

inline double rmse(double mse_value) {
    if (mse_value < 0.0) throw MetricError("rmse: negative mean squared error");
    return std::sqrt(mse_value);
}

/// Predicts the training-period mean for the target's calendar month.
struct ClimatologyBaseline {
    std::array<double, 12> month_mean{};
    std::array<bool, 12> has_month{};

    double predict(int month) const {
        const std::size_t m = static_cast<std::size_t>(month - 1);
        if (month < 1 || month > 12 || !has_month[m]) {
            throw DataError("climatology: no training samples for month " + std::to_string(month));
        }
        return month_mean[m];
    }
};

inline ClimatologyBaseline climatology_baseline(const MonthlySeries& train) {
    std::array<double, 12> sum{};
    std::array<std::size_t, 12> count{};
    for (const MonthPoint& p : train.points) {
        sum[static_cast<std::size_t>(p.month - 1)] += p.precip_mm;
        count[static_cast<std::size_t>(p.month - 1)] += 1;
    }
    ClimatologyBaseline b;
    for (std::size_t m = 0; m < 12; ++m) {
        if (count[m] > 0) {
            b.month_mean[m] = sum[m] / static_cast<double>(count[m]);
            b.has_month[m] = true;
        }
    }
    return b;
}

struct EvalRow {
    int year = 0;
    int month = 0;
    double actual_mm = 0.0;
    double model_mm = 0.0;
    double climatology_mm = 0.0;
    double persistence_mm = 0.0;
};

struct PredictorScore {
    std::string predictor;
    std::size_t n = 0;
    double mse = 0.0;
    double rmse = 0.0;
};

struct EvalReport {
    std::size_t n = 0;
    std::vector<PredictorScore> scores;  // model, climatology, persistence
    std::vector<EvalRow> rows;           // ordered by (year, month)
};

/// One-step forecaster. The context window holds the w normalized true
/// observations preceding the target; year/month identify the target itself.
using PredictFn = std::function<double(const Tensor& window, int year, int month)>;

/// Teacher-forced walk-forward evaluation: every test target is predicted
/// from the w true observations preceding it (values / scale), never from
/// prior predictions. Baselines are scored on the identical pair set.
inline EvalReport evaluate_predictor(const PredictFn& predict, const MonthlySeries& series,
                                     std::size_t window_size, double scale,
                                     double train_fraction) {
    const std::size_t n = series.size();
    const std::size_t cut = split_point(n, train_fraction);
    const std::size_t first_target = std::max(window_size, cut);
    if (first_target >= n) {
        throw DataError("evaluation: test split has no target with a full " +
                        std::to_string(window_size) + "-month context");
    }
    auto [train, test] = chronological_split(series, train_fraction);
    const ClimatologyBaseline clim = climatology_baseline(train);

    EvalReport report;
    Tensor context({window_size, 1});
    for (std::size_t i = first_target; i < n; ++i) {
        for (std::size_t k = 0; k < window_size; ++k) {
            context[k] = series.points[i - window_size + k].precip_mm / scale;
        }
        EvalRow row;
        row.year = series.points[i].year;
        row.month = series.points[i].month;
        row.actual_mm = series.points[i].precip_mm;
        row.model_mm = predict(context, row.year, row.month);
        row.climatology_mm = clim.predict(row.month);
        row.persistence_mm = series.points[i - 1].precip_mm;
        report.rows.push_back(row);
    }
    report.n = report.rows.size();

    std::vector<double> actual(report.n), pm(report.n), pc(report.n), pp(report.n);
    for (std::size_t i = 0; i < report.n; ++i) {
        actual[i] = report.rows[i].actual_mm;
        pm[i] = report.rows[i].model_mm;
        pc[i] = report.rows[i].climatology_mm;
        pp[i] = report.rows[i].persistence_mm;
    }
    const auto score = [&actual](const std::string& name, const std::vector<double>& pred) {
        PredictorScore s;
        s.predictor = name;
        s.n = actual.size();
        s.mse = mse(actual, pred);
        s.rmse = rmse(s.mse);
        return s;
    };
    report.scores.push_back(score("model", pm));
    report.scores.push_back(score("climatology", pc));
    report.scores.push_back(score("persistence", pp));
    return report;
}

inline EvalReport evaluate(const CnnLstmModel& model, const MonthlySeries& series,
                           double train_fraction) {
    return evaluate_predictor(
        [&model](const Tensor& window, int, int) { return model_predict_next(model, window); },
        series, model.config.window_size, model.config.output_scale, train_fraction);
}

struct ForecastRow {
    int year = 0;
    int month = 0;
    double actual_mm = 0.0;
    double predicted_mm = 0.0;
};

/// Walk-forward one-step forecasts over the full post-window series.
inline std::vector<ForecastRow> forecast_rows(const CnnLstmModel& model,
                                              const MonthlySeries& series) {
    const std::size_t w = model.config.window_size;
    if (series.size() <= w) {
        throw DataError("forecast: series of " + std::to_string(series.size()) +
                        " months is not longer than the " + std::to_string(w) + "-month window");
    }
    std::vector<ForecastRow> rows;
    rows.reserve(series.size() - w);
    Tensor context({w, 1});
    for (std::size_t i = w; i < series.size(); ++i) {
        for (std::size_t k = 0; k < w; ++k) {
            context[k] = series.points[i - w + k].precip_mm / model.config.output_scale;
        }
        ForecastRow row;
        row.year = series.points[i].year;
        row.month = series.points[i].month;
        row.actual_mm = series.points[i].precip_mm;
        row.predicted_mm = model_predict_next(model, context);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace pluvia
