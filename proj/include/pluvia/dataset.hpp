#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pluvia/errors.hpp"
#include "pluvia/rng.hpp"
#include "pluvia/tensor.hpp"

namespace pluvia {

constexpr double kMissingSentinel = -99.0;

struct MonthPoint {
    int year = 0;
    int month = 0;  // 1..12
    double precip_mm = 0.0;
};

/// Cleaned (or raw, pre-clean) chronological monthly series.
/// gap_indices are positions, in pre-clean indexing, where clean_missing
/// dropped sentinel values.
struct MonthlySeries {
    std::vector<MonthPoint> points;
    std::string provenance;
    std::vector<std::size_t> gap_indices;
    std::vector<std::string> warnings;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

enum class SeriesFormat { Wide, Long };

inline SeriesFormat series_format_from_name(const std::string& name) {
    if (name == "wide") return SeriesFormat::Wide;
    if (name == "long") return SeriesFormat::Long;
    throw ParameterError("unknown series format: " + name + " (expected wide or long)");
}

/// Months since year 0; consecutive calendar months differ by exactly 1.
inline long month_ordinal(int year, int month) { return static_cast<long>(year) * 12 + (month - 1); }

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

inline int parse_int_field(std::string_view s, std::size_t line_no, const char* what) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " value '" +
                         std::string(s) + "'");
    }
    return v;
}

inline double parse_double_field(std::string_view s, std::size_t line_no, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " value '" +
                         std::string(s) + "'");
    }
    return v;
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const char ca = a[i] >= 'A' && a[i] <= 'Z' ? static_cast<char>(a[i] + 32) : a[i];
        const char cb = b[i] >= 'A' && b[i] <= 'Z' ? static_cast<char>(b[i] + 32) : b[i];
        if (ca != cb) return false;
    }
    return true;
}

inline void sort_and_validate(MonthlySeries& series) {
    const bool sorted = std::is_sorted(series.points.begin(), series.points.end(),
                                       [](const MonthPoint& a, const MonthPoint& b) {
                                           return month_ordinal(a.year, a.month) <
                                                  month_ordinal(b.year, b.month);
                                       });
    if (!sorted) {
        std::stable_sort(series.points.begin(), series.points.end(),
                         [](const MonthPoint& a, const MonthPoint& b) {
                             return month_ordinal(a.year, a.month) < month_ordinal(b.year, b.month);
                         });
        series.warnings.push_back("input rows were out of chronological order and were sorted");
    }
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        const auto& p = series.points[i - 1];
        const auto& q = series.points[i];
        if (month_ordinal(p.year, p.month) == month_ordinal(q.year, q.month)) {
            throw ValidationError("duplicate entry for " + std::to_string(q.year) + "-" +
                                  std::to_string(q.month));
        }
    }
}

}  // namespace detail

/// Parses CSV text into an ordered series. Sentinels (-99) are kept; cleaning
/// is a separate step. Wide layout: header Year,Jan,...,Dec then one row per
/// year with 12 values. Long layout: header year,month,precip_mm then one row
/// per month. Out-of-order rows are re-sorted and a warning is recorded.
inline MonthlySeries parse_series(const std::string& text, SeriesFormat format,
                                  const std::string& provenance = "") {
    MonthlySeries series;
    series.provenance = provenance;

    std::vector<std::string_view> lines;
    {
        std::string_view sv(text);
        std::size_t start = 0;
        for (std::size_t i = 0; i <= sv.size(); ++i) {
            if (i == sv.size() || sv[i] == '\n') {
                lines.push_back(sv.substr(start, i - start));
                start = i + 1;
            }
        }
    }

    bool seen_header = false;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string_view raw = detail::trim(lines[li]);
        if (raw.empty()) continue;
        const std::size_t line_no = li + 1;
        const auto fields = detail::split_csv_line(raw);
        if (!seen_header) {
            if (fields.empty() || !detail::iequals(fields[0], "year")) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected header starting with 'Year'");
            }
            seen_header = true;
            continue;
        }
        if (format == SeriesFormat::Wide) {
            if (fields.size() != 13) {
                throw ParseError("line " + std::to_string(line_no) + ": expected 13 fields, got " +
                                 std::to_string(fields.size()));
            }
            const int year = detail::parse_int_field(fields[0], line_no, "year");
            for (int m = 1; m <= 12; ++m) {
                const double v = detail::parse_double_field(fields[static_cast<std::size_t>(m)],
                                                            line_no, "precipitation");
                series.points.push_back({year, m, v});
            }
        } else {
            if (fields.size() != 3) {
                throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                                 std::to_string(fields.size()));
            }
            const int year = detail::parse_int_field(fields[0], line_no, "year");
            const int month = detail::parse_int_field(fields[1], line_no, "month");
            if (month < 1 || month > 12) {
                throw ValidationError("line " + std::to_string(line_no) + ": month " +
                                      std::to_string(month) + " outside 1-12");
            }
            const double v = detail::parse_double_field(fields[2], line_no, "precipitation");
            series.points.push_back({year, month, v});
        }
    }
    if (!seen_header) throw ParseError("empty input: no header line found");

    detail::sort_and_validate(series);
    return series;
}

/// Drops -99 sentinel points and records their pre-clean positions. The
/// remaining series is treated as contiguous. Idempotent: a series without
/// sentinels is returned unchanged (existing gap records preserved).
inline MonthlySeries clean_missing(const MonthlySeries& series) {
    MonthlySeries out;
    out.provenance = series.provenance;
    out.warnings = series.warnings;
    out.gap_indices = series.gap_indices;
    out.points.reserve(series.points.size());
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const MonthPoint& p = series.points[i];
        if (p.precip_mm == kMissingSentinel) {
            out.gap_indices.push_back(i);
            continue;
        }
        if (p.precip_mm < 0.0) {
            throw ValidationError("negative precipitation " + std::to_string(p.precip_mm) +
                                  " at " + std::to_string(p.year) + "-" + std::to_string(p.month) +
                                  " is not the -99 missing sentinel");
        }
        out.points.push_back(p);
    }
    return out;
}

/// First floor(fraction * n) points become the training series, the rest the
/// test series. No shuffling across the boundary.
inline std::pair<MonthlySeries, MonthlySeries> chronological_split(const MonthlySeries& series,
                                                                   double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ParameterError("split fraction must be in (0, 1), got " +
                             std::to_string(train_fraction));
    }
    const std::size_t n = series.size();
    const std::size_t cut =
        static_cast<std::size_t>(train_fraction * static_cast<double>(n));
    MonthlySeries train, test;
    train.provenance = series.provenance;
    test.provenance = series.provenance;
    train.points.assign(series.points.begin(), series.points.begin() + static_cast<long>(cut));
    test.points.assign(series.points.begin() + static_cast<long>(cut), series.points.end());
    return {std::move(train), std::move(test)};
}

inline std::size_t split_point(std::size_t n, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ParameterError("split fraction must be in (0, 1), got " +
                             std::to_string(train_fraction));
    }
    return static_cast<std::size_t>(train_fraction * static_cast<double>(n));
}

struct Window {
    Tensor input;             // [w x 1], values divided by scale
    double target_mm = 0.0;   // raw mm
    std::size_t target_index = 0;  // index of the target in the source series
};

struct WindowedDataset {
    std::vector<Window> windows;
    std::size_t window_size = 0;
    double scale = 1.0;
};

/// Sliding windows over the cleaned series: for each i in [w, n), the input
/// is values[i-w, i) / scale and the target is values[i] in raw mm. With
/// skip_gap_spanning, windows whose w+1 points are not calendar-contiguous
/// are excluded.
inline WindowedDataset make_windows(const MonthlySeries& series, std::size_t window_size,
                                    double scale, bool skip_gap_spanning = false) {
    if (window_size == 0) throw ParameterError("window size must be >= 1");
    if (!(scale > 0.0)) throw ParameterError("window scale must be positive");
    WindowedDataset ds;
    ds.window_size = window_size;
    ds.scale = scale;
    const std::size_t n = series.size();
    if (n <= window_size) return ds;
    ds.windows.reserve(n - window_size);
    for (std::size_t i = window_size; i < n; ++i) {
        if (skip_gap_spanning) {
            const long span = month_ordinal(series.points[i].year, series.points[i].month) -
                              month_ordinal(series.points[i - window_size].year,
                                            series.points[i - window_size].month);
            if (span != static_cast<long>(window_size)) continue;
        }
        Window w;
        w.input = Tensor({window_size, 1});
        for (std::size_t k = 0; k < window_size; ++k) {
            w.input[k] = series.points[i - window_size + k].precip_mm / scale;
        }
        w.target_mm = series.points[i].precip_mm;
        w.target_index = i;
        ds.windows.push_back(std::move(w));
    }
    return ds;
}

/// Windows whose target index falls before first_test_target go to the
/// training set, the rest to the test set; inputs may span the boundary.
inline std::pair<WindowedDataset, WindowedDataset> split_windows(const WindowedDataset& ds,
                                                                 std::size_t first_test_target) {
    WindowedDataset train, test;
    train.window_size = test.window_size = ds.window_size;
    train.scale = test.scale = ds.scale;
    for (const Window& w : ds.windows) {
        (w.target_index < first_test_target ? train : test).windows.push_back(w);
    }
    return {std::move(train), std::move(test)};
}

/// Fisher-Yates permutation driven by the seeded generator; the window
/// multiset is unchanged.
inline WindowedDataset shuffle_windows(const WindowedDataset& ds, Rng& rng) {
    WindowedDataset out = ds;
    for (std::size_t i = out.windows.size(); i > 1; --i) {
        const std::size_t j = rng.next_index(i);
        std::swap(out.windows[i - 1], out.windows[j]);
    }
    return out;
}

inline double max_precip(const MonthlySeries& series) {
    double mx = 0.0;
    for (const MonthPoint& p : series.points) mx = std::max(mx, p.precip_mm);
    return mx;
}

struct MonthStat {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
    std::size_t count = 0;
};

struct MonthlyStats {
    std::array<std::optional<MonthStat>, 12> by_month;  // index 0 = January
};

namespace detail {

inline double median_of(const std::vector<double>& sorted, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    const std::size_t mid = lo + n / 2;
    if (n % 2 == 1) return sorted[mid];
    return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace detail

/// Inclusive-median (Tukey) quartiles of a sorted sample: with odd n the
/// median belongs to both halves.
inline void tukey_quartiles(const std::vector<double>& sorted, double& q1, double& median,
                            double& q3) {
    const std::size_t n = sorted.size();
    median = detail::median_of(sorted, 0, n);
    if (n == 1) {
        q1 = q3 = sorted[0];
        return;
    }
    const std::size_t half = n / 2;
    q1 = detail::median_of(sorted, 0, n % 2 == 1 ? half + 1 : half);
    q3 = detail::median_of(sorted, half, n);
}

/// Per-calendar-month five-number summary plus mean. Months without samples
/// are marked absent, not zero.
inline MonthlyStats monthly_boxplot_stats(const MonthlySeries& series) {
    std::array<std::vector<double>, 12> buckets;
    for (const MonthPoint& p : series.points) {
        buckets[static_cast<std::size_t>(p.month - 1)].push_back(p.precip_mm);
    }
    MonthlyStats stats;
    for (std::size_t m = 0; m < 12; ++m) {
        auto& v = buckets[m];
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        MonthStat s;
        s.count = v.size();
        s.min = v.front();
        s.max = v.back();
        tukey_quartiles(v, s.q1, s.median, s.q3);
        double sum = 0.0;
        for (double x : v) sum += x;
        s.mean = sum / static_cast<double>(v.size());
        stats.by_month[m] = s;
    }
    return stats;
}

/// Pivot of the series: one row per year, one column per calendar month.
/// Cells with no observation (cleaned gaps included) are absent.
struct YearlyTrendTable {
    std::vector<int> years;  // ascending
    std::vector<std::array<std::optional<double>, 12>> cells;
};

inline YearlyTrendTable yearly_trend_table(const MonthlySeries& series) {
    YearlyTrendTable table;
    for (const MonthPoint& p : series.points) {
        if (table.years.empty() || table.years.back() != p.year) {
            table.years.push_back(p.year);
            table.cells.emplace_back();
        }
        table.cells.back()[static_cast<std::size_t>(p.month - 1)] = p.precip_mm;
    }
    return table;
}

}  // namespace pluvia
