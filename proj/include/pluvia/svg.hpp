#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "pluvia/dataset.hpp"
#include "pluvia/evaluation.hpp"

namespace pluvia {

/// Minimal static SVG charts. The CSV outputs are the machine contract;
/// these renderings mirror them for quick visual inspection.
namespace svg {

constexpr double kWidth = 860.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginBottom = 44.0;

inline std::string num(double v) {
    std::ostringstream os;
    os << std::round(v * 100.0) / 100.0;
    return os.str();
}

inline double plot_w() { return kWidth - kMarginLeft - kMarginRight; }
inline double plot_h() { return kHeight - kMarginTop - kMarginBottom; }
inline double y_pos(double v, double vmax) {
    return kMarginTop + plot_h() * (1.0 - (vmax > 0.0 ? v / vmax : 0.0));
}

inline void open_doc(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"16\" text-anchor=\"middle\" font-size=\"14\" "
          "font-family=\"sans-serif\">"
       << title << "</text>\n";
}

inline void axes(std::ostringstream& os, double vmax, const std::string& y_label) {
    const double x0 = kMarginLeft, y0 = kHeight - kMarginBottom;
    os << "<line x1=\"" << x0 << "\" y1=\"" << kMarginTop << "\" x2=\"" << x0 << "\" y2=\"" << y0
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << kWidth - kMarginRight
       << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = vmax * i / 4.0;
        const double y = y_pos(v, vmax);
        os << "<line x1=\"" << x0 - 4 << "\" y1=\"" << y << "\" x2=\"" << x0 << "\" y2=\"" << y
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << x0 - 8 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(v)
           << "</text>\n";
    }
    os << "<text x=\"14\" y=\"" << kMarginTop + plot_h() / 2
       << "\" font-size=\"11\" font-family=\"sans-serif\" transform=\"rotate(-90 14 "
       << kMarginTop + plot_h() / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
}

inline const char* month_abbrev(std::size_t m) {
    static const char* names[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    return names[m];
}

}  // namespace svg

/// Box-and-whisker chart of the per-month distribution.
inline std::string svg_boxplot(const MonthlyStats& stats, const std::string& title) {
    double vmax = 1.0;
    for (const auto& s : stats.by_month) {
        if (s) vmax = std::max(vmax, s->max);
    }
    std::ostringstream os;
    svg::open_doc(os, title);
    svg::axes(os, vmax, "precipitation (mm)");
    const double slot = svg::plot_w() / 12.0;
    for (std::size_t m = 0; m < 12; ++m) {
        const double cx = svg::kMarginLeft + slot * (static_cast<double>(m) + 0.5);
        os << "<text x=\"" << cx << "\" y=\"" << svg::kHeight - svg::kMarginBottom + 16
           << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
           << svg::month_abbrev(m) << "</text>\n";
        if (!stats.by_month[m]) continue;
        const MonthStat& s = *stats.by_month[m];
        const double half = slot * 0.3;
        const double y_min = svg::y_pos(s.min, vmax), y_q1 = svg::y_pos(s.q1, vmax);
        const double y_med = svg::y_pos(s.median, vmax), y_q3 = svg::y_pos(s.q3, vmax);
        const double y_max = svg::y_pos(s.max, vmax);
        os << "<line x1=\"" << cx << "\" y1=\"" << y_min << "\" x2=\"" << cx << "\" y2=\"" << y_q1
           << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << cx << "\" y1=\"" << y_q3 << "\" x2=\"" << cx << "\" y2=\"" << y_max
           << "\" stroke=\"black\"/>\n";
        os << "<rect x=\"" << cx - half << "\" y=\"" << y_q3 << "\" width=\"" << 2 * half
           << "\" height=\"" << std::max(1.0, y_q1 - y_q3)
           << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << cx - half << "\" y1=\"" << y_med << "\" x2=\"" << cx + half
           << "\" y2=\"" << y_med << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// One polyline per year across the 12 months.
inline std::string svg_trend(const YearlyTrendTable& table, const std::string& title) {
    double vmax = 1.0;
    for (const auto& row : table.cells) {
        for (const auto& cell : row) {
            if (cell) vmax = std::max(vmax, *cell);
        }
    }
    std::ostringstream os;
    svg::open_doc(os, title);
    svg::axes(os, vmax, "precipitation (mm)");
    const double slot = svg::plot_w() / 12.0;
    for (std::size_t m = 0; m < 12; ++m) {
        const double cx = svg::kMarginLeft + slot * (static_cast<double>(m) + 0.5);
        os << "<text x=\"" << cx << "\" y=\"" << svg::kHeight - svg::kMarginBottom + 16
           << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
           << svg::month_abbrev(m) << "</text>\n";
    }
    for (std::size_t r = 0; r < table.cells.size(); ++r) {
        std::ostringstream pts;
        bool any = false;
        for (std::size_t m = 0; m < 12; ++m) {
            if (!table.cells[r][m]) continue;
            const double cx = svg::kMarginLeft + slot * (static_cast<double>(m) + 0.5);
            pts << cx << "," << svg::y_pos(*table.cells[r][m], vmax) << " ";
            any = true;
        }
        if (!any) continue;
        os << "<polyline points=\"" << pts.str()
           << "\" fill=\"none\" stroke=\"#3182bd\" stroke-opacity=\"0.35\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// Actual-vs-predicted overlay across the forecast horizon.
inline std::string svg_forecast(const std::vector<ForecastRow>& rows, const std::string& title) {
    double vmax = 1.0;
    for (const ForecastRow& r : rows) {
        vmax = std::max({vmax, r.actual_mm, r.predicted_mm});
    }
    std::ostringstream os;
    svg::open_doc(os, title);
    svg::axes(os, vmax, "precipitation (mm)");
    if (!rows.empty()) {
        const double step = svg::plot_w() / static_cast<double>(rows.size());
        std::ostringstream actual_pts, pred_pts;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double x = svg::kMarginLeft + step * (static_cast<double>(i) + 0.5);
            actual_pts << x << "," << svg::y_pos(rows[i].actual_mm, vmax) << " ";
            pred_pts << x << "," << svg::y_pos(rows[i].predicted_mm, vmax) << " ";
        }
        os << "<polyline points=\"" << actual_pts.str()
           << "\" fill=\"none\" stroke=\"#31a354\" stroke-width=\"1.5\"/>\n";
        os << "<polyline points=\"" << pred_pts.str()
           << "\" fill=\"none\" stroke=\"#de2d26\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << svg::kWidth - 180 << "\" y=\"" << svg::kMarginTop + 14
           << "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#31a354\">actual</text>\n";
        os << "<text x=\"" << svg::kWidth - 120 << "\" y=\"" << svg::kMarginTop + 14
           << "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#de2d26\">predicted</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace pluvia
