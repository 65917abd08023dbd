#pragma once

// Shared helpers for the test binaries: deterministic synthetic series and
// small conveniences. Everything here is seeded through pluvia::Rng so the
// suites are bit-reproducible.

#include <cmath>
#include <string>

#include "pluvia/dataset.hpp"
#include "pluvia/rng.hpp"

namespace testsupport {

constexpr double kPi = 3.14159265358979323846;

/// value(k) = max(0, 200 + 180*sin(2*pi*k/12) + a_k) where the anomalies a_k
/// follow an AR(1) process with marginal standard deviation sigma = 10:
/// a_k = rho*a_{k-1} + eta_k, eta uniform with sd sigma*sqrt(1 - rho^2).
/// Month-to-month anomaly persistence mirrors real precipitation records and
/// gives a window-based forecaster signal that a per-month climatology cannot
/// use. The clamp at zero keeps the series physical; with these constants it
/// touches only the rare deep-negative anomalies in dry-season months.
inline pluvia::MonthlySeries synthetic_sine_series(std::size_t months, std::uint64_t noise_seed,
                                                   double rho = 0.9, double sigma = 10.0) {
    pluvia::MonthlySeries s;
    s.provenance = "synthetic-sine";
    pluvia::Rng rng(noise_seed);
    const double eta_half = sigma * std::sqrt(1.0 - rho * rho) * std::sqrt(3.0);
    double anomaly = 0.0;
    for (std::size_t k = 0; k < months; ++k) {
        const int year = 1900 + static_cast<int>(k / 12);
        const int month = 1 + static_cast<int>(k % 12);
        anomaly = rho * anomaly + rng.next_uniform(-eta_half, eta_half);
        const double base = 200.0 + 180.0 * std::sin(2.0 * kPi * static_cast<double>(k) / 12.0);
        s.points.push_back({year, month, std::max(0.0, base + anomaly)});
    }
    return s;
}

/// Monsoon-shaped monthly climate in mm, peaking June-September, with
/// year-to-year amplitude variation and multiplicative noise. Mirrors the
/// seasonal structure of monsoon-region records (dry Jan-Feb, wet Jun-Sep,
/// maxima around 700 mm). sentinel_every > 0 plants a -99 missing marker at
/// every k-th position to exercise cleaning.
inline pluvia::MonthlySeries synthetic_monsoon_series(int first_year, int years,
                                                      std::uint64_t noise_seed,
                                                      std::size_t sentinel_every = 0) {
    static const double climatology[12] = {2.0,  1.0,  3.0,  14.0, 38.0,  160.0,
                                           320.0, 260.0, 180.0, 70.0, 30.0, 6.0};
    pluvia::MonthlySeries s;
    s.provenance = "synthetic-monsoon";
    pluvia::Rng rng(noise_seed);
    std::size_t k = 0;
    for (int y = 0; y < years; ++y) {
        const double year_factor = rng.next_uniform(0.6, 1.6);
        for (int m = 0; m < 12; ++m, ++k) {
            double v;
            if (sentinel_every > 0 && (k + 1) % sentinel_every == 0) {
                v = -99.0;
            } else {
                v = climatology[m] * year_factor * rng.next_uniform(0.7, 1.35);
            }
            s.points.push_back({first_year + y, m + 1, v});
        }
    }
    return s;
}

inline std::string series_to_long_csv(const pluvia::MonthlySeries& s) {
    std::string out = "year,month,precip_mm\n";
    char buf[64];
    for (const pluvia::MonthPoint& p : s.points) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", p.year, p.month, p.precip_mm);
        out += buf;
    }
    return out;
}

}  // namespace testsupport
