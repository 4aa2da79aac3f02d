#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dsson/error.hpp"
#include "dsson/time_series.hpp"

// Synthetic exercise-session fixtures. Each profile produces a revolution-rate
// trace around the 0.4 Hz target with known, recorded features so tests can
// assert against ground truth. Everything is a pure function of the seed.

namespace dsson::testdata {

struct TruthRow {
    std::string kind; // overshoot | undershoot | flat_top
    double start_s = 0.0;
    double duration_s = 0.0;
    double peak_value = 0.0;
};

struct Fixture {
    TimeSeries series;
    std::vector<TruthRow> truth;
};

enum class Profile { steady, poor, novice };

inline Profile profile_from_name(const std::string& name) {
    if (name == "steady")
        return Profile::steady;
    if (name == "poor")
        return Profile::poor;
    if (name == "novice")
        return Profile::novice;
    throw ParamError(Stage::cli, "unknown profile '" + name + "'");
}

namespace detail {

// Raised-cosine bump of given half-height duration, centered.
inline double bump(double t, double center, double width) {
    const double u = (t - center) / width;
    if (u <= -1.0 || u >= 1.0)
        return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * u));
}

struct Wobble { // sum of a few incommensurate slow sines
    std::vector<double> amp, freq, phase;
    double eval(double t) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < amp.size(); ++i)
            acc += amp[i] * std::sin(2.0 * std::numbers::pi * freq[i] * t + phase[i]);
        return acc;
    }
};

inline Wobble make_wobble(std::mt19937& rng, double total_amp, double base_freq) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Wobble w;
    for (int i = 0; i < 3; ++i) {
        w.amp.push_back(total_amp * (0.5 + 0.5 * u(rng)) / 3.0);
        w.freq.push_back(base_freq * (0.6 + 0.9 * u(rng)));
        w.phase.push_back(2.0 * std::numbers::pi * u(rng));
    }
    return w;
}

} // namespace detail

inline Fixture generate(Profile profile, std::uint64_t seed, double duration_s = 60.0,
                        double sample_rate_hz = 100.0) {
    std::mt19937 rng(static_cast<std::uint32_t>(seed ^ 0x9e3779b9));
    std::uniform_real_distribution<double> u(0.0, 1.0);

    double trend_amp = 0.0, osc_amp = 0.0;
    switch (profile) {
    case Profile::steady:
        trend_amp = 0.008;
        osc_amp = 0.04;
        break;
    case Profile::novice:
        trend_amp = 0.05;
        osc_amp = 0.065;
        break;
    case Profile::poor:
        trend_amp = 0.11;
        osc_amp = 0.1;
        break;
    }

    const detail::Wobble trend_w = detail::make_wobble(rng, trend_amp, 0.02);
    const detail::Wobble am_w = detail::make_wobble(rng, 0.3, 0.05);
    const double osc_freq = 0.8; // two up/down strokes per 0.4 Hz revolution
    const double osc_phase = 2.0 * std::numbers::pi * u(rng);

    Fixture fx;
    std::vector<TruthRow>& truth = fx.truth;

    // feature placement: fixed fractions of the file with a little seed jitter
    auto jitter = [&](double frac, double max_shift) {
        return frac * duration_s + max_shift * (2.0 * u(rng) - 1.0);
    };
    std::vector<TruthRow> bumps;
    if (profile == Profile::poor) {
        bumps.push_back({"overshoot", jitter(0.15, 1.5), 0.8, 0.70});
        bumps.push_back({"overshoot", jitter(0.55, 1.5), 0.7, 0.68});
        bumps.push_back({"undershoot", jitter(0.35, 1.5), 1.2, 0.14});
        bumps.push_back({"undershoot", jitter(0.8, 1.5), 1.4, 0.12});
    }
    std::vector<TruthRow> plateaus;
    if (profile == Profile::novice) {
        plateaus.push_back({"flat_top", jitter(0.3, 1.0), 0.9, 0.0});
        plateaus.push_back({"flat_top", jitter(0.7, 1.0), 0.8, 0.0});
    }

    const auto n = static_cast<std::size_t>(std::lround(duration_s * sample_rate_hz));
    std::vector<double> x(n);
    auto base_at = [&](double t) {
        const double trend = 0.4 + trend_w.eval(t);
        const double am = 1.0 + 0.25 * am_w.eval(t);
        return trend + osc_amp * am * std::sin(2.0 * std::numbers::pi * osc_freq * t + osc_phase);
    };
    for (std::size_t i = 0; i < n; ++i)
        x[i] = base_at(static_cast<double>(i) / sample_rate_hz);

    // bump height from the local base value, so the recorded extreme is hit
    // exactly at the bump center regardless of the wander underneath
    for (TruthRow& b : bumps) {
        const double center = b.start_s + b.duration_s / 2.0;
        const double height = b.peak_value - base_at(center);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sample_rate_hz;
            x[i] += height * detail::bump(t, center, b.duration_s / 2.0);
        }
    }

    // plateaus: overwrite with a constant, short linear blend on both sides
    for (TruthRow& p : plateaus) {
        const double blend_s = 0.12;
        const auto i0 = static_cast<std::size_t>(std::lround(p.start_s * sample_rate_hz));
        const auto len = static_cast<std::size_t>(std::lround(p.duration_s * sample_rate_hz));
        const auto nb = static_cast<std::size_t>(std::lround(blend_s * sample_rate_hz));
        if (i0 < nb || i0 + len + nb >= n)
            continue;
        const double level = x[i0];
        p.peak_value = level;
        for (std::size_t j = 0; j < nb; ++j) {
            const double f = static_cast<double>(j + 1) / static_cast<double>(nb + 1);
            x[i0 - nb + j] = (1.0 - f) * x[i0 - nb + j] + f * level;
            x[i0 + len + nb - 1 - j] = (1.0 - f) * x[i0 + len + nb - 1 - j] + f * level;
        }
        for (std::size_t j = 0; j < len; ++j)
            x[i0 + j] = level;
        truth.push_back(p);
    }
    for (const TruthRow& b : bumps)
        truth.push_back(b);

    fx.series = TimeSeries(std::move(x), sample_rate_hz);
    return fx;
}

} // namespace dsson::testdata
