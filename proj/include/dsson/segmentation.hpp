#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dsson/error.hpp"
#include "dsson/time_series.hpp"
#include "dsson/trend.hpp"

namespace dsson {

enum class Polarity { positive, negative };

// One inter-cutting-point slice of the source stream with cached statistics.
// `ac` holds the trend-free samples the synthesis stage works from, `raw`
// the original values used for absolute range classification.
struct Segment {
    std::size_t index = 0; // 1-based
    double start_time_s = 0.0;
    double duration_s = 0.0;
    std::vector<double> ac;
    std::vector<double> raw;
    double trend_at_start = 0.0;
    Polarity polarity = Polarity::positive;
    double max_mag = 0.0;
    double area = 0.0; // time integral of |ac|, rectangle rule
    double sample_rate_hz = 0.0;

    std::size_t count() const { return ac.size(); }
    bool all_zero() const { return max_mag == 0.0; }
};

// Values this close to zero count as exact zeros when classifying sample
// signs. Catches crossings that land on a sample up to floating-point noise
// (e.g. sin(pi) ~ 1e-16).
inline constexpr double kZeroTol = 1e-12;

namespace detail {
inline int sign_class(double v) {
    if (std::abs(v) <= kZeroTol)
        return 0;
    return v > 0.0 ? 1 : -1;
}
} // namespace detail

// Cutting points as sample indices, always starting at 0 and ending at
// count. An interior cut lands on the first sample of a new sign; a run of
// exact zeros gets a single cut at the run's start.
inline std::vector<std::size_t> find_cutting_points(const std::vector<double>& ac,
                                                    double /*sample_rate_hz*/ = 0.0) {
    if (ac.size() < 2)
        throw ParamError(Stage::segmentation, "need at least 2 samples");
    std::vector<std::size_t> cuts;
    cuts.push_back(0);
    int prev = detail::sign_class(ac[0]);
    for (std::size_t n = 1; n < ac.size(); ++n) {
        const int cur = detail::sign_class(ac[n]);
        const bool flip = cur != 0 && prev != 0 && cur != prev;
        const bool zero_run_start = cur == 0 && prev != 0;
        if (flip || zero_run_start)
            cuts.push_back(n);
        prev = cur;
    }
    cuts.push_back(ac.size());
    return cuts;
}

// Slices [cuts[i-1], cuts[i]) into Segments. Slices shorter than 2 samples
// are merged into the following segment (preceding, for the last) so no
// zero-length sonic events arise downstream.
inline std::vector<Segment> extract_segments(const TrendDecomposition& decomp,
                                             const TimeSeries& raw,
                                             const std::vector<std::size_t>& cuts) {
    const std::size_t n = decomp.ac.size();
    if (cuts.size() < 2 || cuts.front() != 0 || cuts.back() != n)
        throw InternalError(Stage::segmentation, "cut list must span [0, count]");
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (cuts[i] <= cuts[i - 1])
            throw InternalError(Stage::segmentation, "cuts not strictly increasing");
    if (raw.count() != n || decomp.trend.size() != n)
        throw InternalError(Stage::segmentation, "decomposition/raw length mismatch");

    // merge pass: keep only cuts that leave >= 2 samples per slice
    std::vector<std::size_t> kept;
    kept.push_back(0);
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i)
        if (cuts[i] - kept.back() >= 2)
            kept.push_back(cuts[i]);
    if (n - kept.back() < 2 && kept.size() > 1)
        kept.pop_back(); // last slice too short: merge into preceding
    kept.push_back(n);

    const double rate = decomp.source_rate_hz;
    std::vector<Segment> segments;
    segments.reserve(kept.size() - 1);
    for (std::size_t i = 1; i < kept.size(); ++i) {
        const std::size_t lo = kept[i - 1], hi = kept[i];
        Segment s;
        s.index = i;
        s.sample_rate_hz = rate;
        s.start_time_s = static_cast<double>(lo) / rate;
        s.duration_s = static_cast<double>(hi - lo) / rate;
        s.ac.assign(decomp.ac.begin() + static_cast<std::ptrdiff_t>(lo),
                    decomp.ac.begin() + static_cast<std::ptrdiff_t>(hi));
        s.raw.assign(raw.samples.begin() + static_cast<std::ptrdiff_t>(lo),
                     raw.samples.begin() + static_cast<std::ptrdiff_t>(hi));
        s.trend_at_start = decomp.trend[lo];

        double peak = 0.0, peak_signed = 0.0, area = 0.0;
        for (double v : s.ac) {
            const double m = std::abs(v);
            if (m > peak) {
                peak = m;
                peak_signed = v;
            }
            area += m;
        }
        s.max_mag = peak;
        s.area = area / rate;
        // all-zero slices get positive polarity; analyze flags them
        s.polarity = peak_signed < 0.0 ? Polarity::negative : Polarity::positive;
        segments.push_back(std::move(s));
    }
    return segments;
}

} // namespace dsson
