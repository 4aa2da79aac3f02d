#pragma once

#include <cmath>
#include <cstddef>
#include <iostream>
#include <numbers>
#include <vector>

#include "dsson/error.hpp"
#include "dsson/segmentation.hpp"

namespace dsson {

// One synthesized audio snippet plus its placement in sonification time.
struct SonicEvent {
    double onset_s = 0.0; // sonification-time onset
    std::vector<double> audio;
    double audio_rate_hz = 0.0;
    std::size_t source_index = 0;

    bool silent() const {
        for (double v : audio)
            if (v != 0.0)
                return false;
        return true;
    }
};

// Reference frequencies for positive/negative segments plus the octave
// scales applied to the trend value and the instantaneous deviation.
struct PitchSpec {
    double f_up_hz = 400.0;
    double f_down_hz = 300.0;
    double alpha = 2.0; // octaves per unit of trend
    double beta = 2.0;  // octaves per unit of deviation

    void validate() const {
        if (!(f_up_hz > 0.0) || !(f_down_hz > 0.0))
            throw ParamError(Stage::synth, "reference frequencies must be positive");
        if (alpha < 0.0 || beta < 0.0)
            throw ParamError(Stage::synth, "pitch scales must be non-negative");
    }
};

enum class TimbreKind { identity, harmonic, subharmonic };

// Additive complex applied to the oscillator: partials j = 1..J with
// amplitudes j^-nu, at j*phi (harmonic) or phi/j (subharmonic).
struct TimbreSpec {
    TimbreKind kind = TimbreKind::identity;
    std::size_t partial_count_J = 5;
    double rolloff_nu = 2.0;
    double gain_c = 1.0;

    void validate() const {
        if (partial_count_J < 1)
            throw ParamError(Stage::synth, "need at least one partial");
        if (!(gain_c > 0.0))
            throw ParamError(Stage::synth, "timbre gain must be positive");
        if (rolloff_nu < 0.0)
            throw ParamError(Stage::synth, "rolloff must be non-negative");
    }
};

namespace detail {

// Segment data value at data-domain time t_s, linearly interpolated between
// samples and clamped at the edges.
inline double sample_segment(const std::vector<double>& values, double rate_hz, double t_s) {
    const double pos = t_s * rate_hz;
    if (pos <= 0.0)
        return values.front();
    const auto last = static_cast<double>(values.size() - 1);
    if (pos >= last)
        return values.back();
    const auto i0 = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i0);
    return values[i0] * (1.0 - frac) + values[i0 + 1] * frac;
}

} // namespace detail

// Audio-sample count of a segment's sonic event: round(T_i / dilation * rate).
inline std::size_t event_length(const Segment& seg, double dilation, double audio_rate_hz) {
    if (!(dilation > 0.0))
        throw ParamError(Stage::synth, "dilation must be positive");
    if (!(audio_rate_hz > 0.0))
        throw ParamError(Stage::synth, "audio rate must be positive");
    return static_cast<std::size_t>(std::llround(seg.duration_s / dilation * audio_rate_hz));
}

// a[k] = |x_i(dilation * k / rate)| ^ gamma
inline std::vector<double> am_magnitude(const Segment& seg, double dilation, double gamma,
                                        double audio_rate_hz) {
    if (!(gamma >= 1.0))
        throw ParamError(Stage::synth, "power-law exponent must be >= 1, got " +
                                           std::to_string(gamma));
    const std::size_t n = event_length(seg, dilation, audio_rate_hz);
    std::vector<double> a(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = dilation * static_cast<double>(k) / audio_rate_hz;
        const double m = std::abs(detail::sample_segment(seg.ac, seg.sample_rate_hz, t));
        a[k] = gamma == 1.0 ? m : std::pow(m, gamma);
    }
    return a;
}

// a[k] = max(|x_i| - theta, 0): only the part of the deviation that exceeds
// the threshold sounds.
inline std::vector<double> am_halfwave_threshold(const Segment& seg, double dilation,
                                                 double theta, double audio_rate_hz) {
    if (theta < 0.0)
        throw ParamError(Stage::synth, "threshold must be non-negative");
    const std::size_t n = event_length(seg, dilation, audio_rate_hz);
    std::vector<double> a(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = dilation * static_cast<double>(k) / audio_rate_hz;
        const double m = std::abs(detail::sample_segment(seg.ac, seg.sample_rate_hz, t));
        a[k] = m >= theta ? m - theta : 0.0;
    }
    return a;
}

// Whole-segment gate: if the segment's peak magnitude reaches theta the full
// magnitude envelope sounds, otherwise the event keeps its time slot silently.
inline std::vector<double> am_gate(const Segment& seg, double dilation, double theta,
                                   double audio_rate_hz) {
    if (theta < 0.0)
        throw ParamError(Stage::synth, "threshold must be non-negative");
    if (seg.max_mag < theta)
        return std::vector<double>(event_length(seg, dilation, audio_rate_hz), 0.0);
    return am_magnitude(seg, dilation, 1.0, audio_rate_hz);
}

// Attack/decay envelope max_mag * u * e^-(u-1) with u = dilation * t / tau,
// tau = tau_factor * T_i. Peaks at u = 1; with tau_factor 0.13 the event ends
// about 40 dB below the peak. A raised-cosine fade over the last fade_s
// seconds removes the residual step at the cutoff.
inline std::vector<double> am_envelope(const Segment& seg, double dilation_i, double tau_factor,
                                       double audio_rate_hz, double fade_s = 0.005) {
    if (!(tau_factor > 0.0))
        throw ParamError(Stage::synth, "tau factor must be positive");
    const double tau = tau_factor * seg.duration_s;
    const std::size_t n = event_length(seg, dilation_i, audio_rate_hz);
    std::vector<double> a(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = dilation_i * static_cast<double>(k) / audio_rate_hz / tau;
        a[k] = seg.max_mag * u * std::exp(-(u - 1.0));
    }
    std::size_t fade = static_cast<std::size_t>(std::llround(fade_s * audio_rate_hz));
    if (fade > n)
        fade = n;
    for (std::size_t j = 0; j < fade; ++j) {
        const double w =
            0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(j + 1) /
                                  static_cast<double>(fade)));
        a[n - fade + j] *= w;
    }
    return a;
}

// b[k] = alpha * x_trend(t_{i-1}) + beta * x_AC(dilation * k / rate);
// instantaneous frequency becomes f_rf * 2^b[k].
inline std::vector<double> pitch_exponent(const Segment& seg, double dilation,
                                          const PitchSpec& spec, double audio_rate_hz) {
    spec.validate();
    const std::size_t n = event_length(seg, dilation, audio_rate_hz);
    std::vector<double> b(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = dilation * static_cast<double>(k) / audio_rate_hz;
        b[k] = spec.alpha * seg.trend_at_start +
               spec.beta * detail::sample_segment(seg.ac, seg.sample_rate_hz, t);
    }
    return b;
}

// Expand a phase track into the configured partial complex.
inline std::vector<double> apply_timbre(const std::vector<double>& phase,
                                        const TimbreSpec& timbre) {
    timbre.validate();
    std::vector<double> out(phase.size());
    switch (timbre.kind) {
    case TimbreKind::identity:
        for (std::size_t k = 0; k < phase.size(); ++k)
            out[k] = std::sin(phase[k]);
        break;
    case TimbreKind::harmonic:
        for (std::size_t k = 0; k < phase.size(); ++k) {
            double acc = 0.0;
            for (std::size_t j = 1; j <= timbre.partial_count_J; ++j)
                acc += std::pow(static_cast<double>(j), -timbre.rolloff_nu) *
                       std::sin(static_cast<double>(j) * phase[k]);
            out[k] = timbre.gain_c * acc;
        }
        break;
    case TimbreKind::subharmonic:
        for (std::size_t k = 0; k < phase.size(); ++k) {
            double acc = 0.0;
            for (std::size_t j = 1; j <= timbre.partial_count_J; ++j)
                acc += std::pow(static_cast<double>(j), -timbre.rolloff_nu) *
                       std::sin(phase[k] / static_cast<double>(j));
            out[k] = timbre.gain_c * acc;
        }
        break;
    }
    return out;
}

// am[k] * Xi<sin(phi[k])> with phi accumulated from the instantaneous
// frequency f_rf * 2^b[k]; the reference frequency follows the segment's
// polarity. Phase starts at 0 so the first sample is exactly silent.
// The onset is assigned by the mixdown scheduler.
inline SonicEvent synthesize_event(const Segment& seg, const std::vector<double>& am,
                                   const std::vector<double>& b, const PitchSpec& spec,
                                   const TimbreSpec& timbre, double audio_rate_hz) {
    spec.validate();
    timbre.validate();
    if (am.size() != b.size())
        throw ParamError(Stage::synth, "amplitude and pitch tracks differ in length");

    const double f_rf = seg.polarity == Polarity::positive ? spec.f_up_hz : spec.f_down_hz;
    const double bandwidth_mult =
        timbre.kind == TimbreKind::harmonic ? static_cast<double>(timbre.partial_count_J) : 1.0;

    std::vector<double> phase(b.size());
    double phi = 0.0, f_peak = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const double f_inst = f_rf * std::exp2(b[k]);
        if (f_inst > f_peak)
            f_peak = f_inst;
        if (k > 0)
            phi += 2.0 * std::numbers::pi * f_inst / audio_rate_hz;
        phase[k] = phi;
    }
    if (f_peak * bandwidth_mult >= audio_rate_hz / 2.0)
        throw AliasingError(seg.index, f_peak * bandwidth_mult, audio_rate_hz);

    SonicEvent ev;
    ev.audio_rate_hz = audio_rate_hz;
    ev.source_index = seg.index;
    ev.audio = apply_timbre(phase, timbre);
    for (std::size_t k = 0; k < ev.audio.size(); ++k)
        ev.audio[k] *= am[k];
    return ev;
}

// Hyperbolic dilation of excursion segments: area at or above the threshold
// shrinks delta so the event duration grows linearly with the area.
inline double dilation_for_segment(const Segment& seg, double dilation_0, double sigma,
                                   double area_threshold, bool is_excursion) {
    if (!(dilation_0 > 0.0))
        throw ParamError(Stage::synth, "dilation must be positive");
    if (!(sigma >= 1.0))
        throw ParamError(Stage::synth, "sigma must be >= 1");
    if (!(area_threshold > 0.0))
        throw ParamError(Stage::synth, "area threshold must be positive");
    if (!is_excursion || seg.area < area_threshold)
        return dilation_0;
    if (seg.area == 0.0) {
        std::cerr << "dsson: warning: excursion segment " << seg.index
                  << " has zero area; keeping base dilation\n";
        return dilation_0;
    }
    return (1.0 / sigma) * (area_threshold / seg.area) * dilation_0;
}

} // namespace dsson
