#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dsson/error.hpp"
#include "dsson/time_series.hpp"

namespace dsson {

// Paired trend and trend-free components of a source series.
// source[n] == trend[n] + ac[n] by construction.
struct TrendDecomposition {
    std::vector<double> trend;
    std::vector<double> ac;
    double source_rate_hz = 0.0;
};

// Centered moving mean. The window is round(window_s * rate) samples, forced
// odd by rounding up, so the filter is zero-phase and crossings of the
// residual stay aligned with the source. Edge-replication padding keeps the
// output the same length as the input.
inline std::vector<double> moving_average(const TimeSeries& ts, double window_s) {
    if (!(window_s >= 2.0 / ts.sample_rate_hz))
        throw ParamError(Stage::trend, "window must span at least 2 samples");
    std::size_t len = static_cast<std::size_t>(std::lround(window_s * ts.sample_rate_hz));
    if (len % 2 == 0)
        ++len;

    const auto n = static_cast<std::ptrdiff_t>(ts.count());
    const auto h = static_cast<std::ptrdiff_t>((len - 1) / 2);
    std::vector<double> out(ts.count());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::ptrdiff_t j = i - h; j <= i + h; ++j) {
            const std::ptrdiff_t k = std::clamp<std::ptrdiff_t>(j, 0, n - 1);
            acc += ts.samples[static_cast<std::size_t>(k)];
        }
        out[static_cast<std::size_t>(i)] = acc / static_cast<double>(len);
    }
    return out;
}

// x_trend = w * x_target + (1 - w) * x_MA, elementwise.
inline std::vector<double> weighted_trend(const std::vector<double>& ma, double x_target,
                                          double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw ParamError(Stage::trend, "weight must be in [0, 1], got " + std::to_string(w));
    std::vector<double> out(ma.size());
    for (std::size_t i = 0; i < ma.size(); ++i)
        out[i] = w * x_target + (1.0 - w) * ma[i];
    return out;
}

inline TrendDecomposition detrend(const TimeSeries& ts, std::vector<double> trend) {
    if (trend.size() != ts.count())
        throw ParamError(Stage::trend, "trend length " + std::to_string(trend.size()) +
                                           " does not match sample count " +
                                           std::to_string(ts.count()));
    TrendDecomposition d;
    d.source_rate_hz = ts.sample_rate_hz;
    d.ac.resize(ts.count());
    for (std::size_t i = 0; i < ts.count(); ++i)
        d.ac[i] = ts.samples[i] - trend[i];
    d.trend = std::move(trend);
    return d;
}

} // namespace dsson
