#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "pluvia/dataset.hpp"
#include "pluvia/evaluation.hpp"
#include "pluvia/training.hpp"

namespace pluvia {

/// 17 significant decimal digits: enough to round-trip any binary64 exactly,
/// and a deterministic function of the value.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
    if (!out) throw DataError("failed writing file: " + path);
}

inline MonthlySeries load_series(const std::string& path, SeriesFormat format) {
    return parse_series(read_text_file(path), format, path);
}

inline std::string monthly_stats_csv(const MonthlyStats& stats) {
    std::ostringstream os;
    os << "month,min,q1,median,q3,max,mean,count\n";
    for (std::size_t m = 0; m < 12; ++m) {
        os << (m + 1) << ",";
        if (stats.by_month[m]) {
            const MonthStat& s = *stats.by_month[m];
            os << fmt_g17(s.min) << "," << fmt_g17(s.q1) << "," << fmt_g17(s.median) << ","
               << fmt_g17(s.q3) << "," << fmt_g17(s.max) << "," << fmt_g17(s.mean) << ","
               << s.count;
        } else {
            os << ",,,,,,0";
        }
        os << "\n";
    }
    return os.str();
}

inline std::string yearly_trend_csv(const YearlyTrendTable& table) {
    std::ostringstream os;
    os << "year,jan,feb,mar,apr,may,jun,jul,aug,sep,oct,nov,dec\n";
    for (std::size_t r = 0; r < table.years.size(); ++r) {
        os << table.years[r];
        for (std::size_t m = 0; m < 12; ++m) {
            os << ",";
            if (table.cells[r][m]) os << fmt_g17(*table.cells[r][m]);
        }
        os << "\n";
    }
    return os.str();
}

/// Wall time is intentionally not persisted so identical runs produce
/// identical files.
inline std::string history_csv(const TrainingHistory& history) {
    std::ostringstream os;
    os << "epoch,loss,lr\n";
    for (const EpochStats& e : history) {
        os << e.epoch << "," << fmt_g17(e.mean_loss) << "," << fmt_g17(e.lr) << "\n";
    }
    return os.str();
}

inline std::string evaluation_csv(const EvalReport& report) {
    std::ostringstream os;
    os << "year,month,actual_mm,model_mm,climatology_mm,persistence_mm\n";
    for (const EvalRow& r : report.rows) {
        os << r.year << "," << r.month << "," << fmt_g17(r.actual_mm) << ","
           << fmt_g17(r.model_mm) << "," << fmt_g17(r.climatology_mm) << ","
           << fmt_g17(r.persistence_mm) << "\n";
    }
    return os.str();
}

inline std::string summary_csv(const EvalReport& report) {
    std::ostringstream os;
    os << "predictor,n,mse,rmse\n";
    for (const PredictorScore& s : report.scores) {
        os << s.predictor << "," << s.n << "," << fmt_g17(s.mse) << "," << fmt_g17(s.rmse) << "\n";
    }
    return os.str();
}

inline std::string forecast_csv(const std::vector<ForecastRow>& rows) {
    std::ostringstream os;
    os << "year,month,actual_mm,predicted_mm\n";
    for (const ForecastRow& r : rows) {
        os << r.year << "," << r.month << "," << fmt_g17(r.actual_mm) << ","
           << fmt_g17(r.predicted_mm) << "\n";
    }
    return os.str();
}

}  // namespace pluvia
