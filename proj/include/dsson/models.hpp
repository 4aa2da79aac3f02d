#pragma once

#include <cmath>
#include <cstddef>
#include <exception>
#include <iostream>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "dsson/error.hpp"
#include "dsson/segmentation.hpp"
#include "dsson/synth.hpp"
#include "dsson/time_series.hpp"
#include "dsson/trend.hpp"

namespace dsson {

enum class Model { basic, itr, adv, audify };

inline const char* model_name(Model m) {
    switch (m) {
    case Model::basic: return "basic";
    case Model::itr: return "itr";
    case Model::adv: return "adv";
    case Model::audify: return "audify";
    }
    return "?";
}

inline Model model_from_name(const std::string& name) {
    if (name == "basic")
        return Model::basic;
    if (name == "itr")
        return Model::itr;
    if (name == "adv")
        return Model::adv;
    if (name == "audify")
        return Model::audify;
    throw ParamError(Stage::models, "unknown model '" + name + "'");
}

// Full parameter set: compression, dilation, pitch mapping, the amplitude
// modulator knobs, timbre complex, and audio output settings.
struct SonificationParams {
    Model model = Model::basic;
    double kappa = 5.0;      // data duration / sonification duration
    double dilation_0 = 5.0; // segment duration / event duration
    PitchSpec pitch;
    double gamma = 1.0; // power-law AM distortion
    double theta = 0.0; // deviation threshold (units of the data)
    double w = 0.2;     // trend blend toward x_target
    double x_target = 0.4;
    double ma_window_s = 2.5; // one revolution at the 0.4 Hz optimum
    double limit_lo = 0.2;
    double limit_hi = 0.6;
    std::size_t timbre_J = 5;
    double timbre_nu = 2.0;
    double gain_over = 0.5;
    double gain_under = 0.7;
    double area_threshold = 1.0 / (8.0 * std::numbers::pi);
    double sigma = 1.0;
    double tau_factor = 0.13;
    double audio_rate_hz = 44100.0;
    double peak_dbfs = -1.0;

    void validate() const {
        pitch.validate();
        if (!(kappa > 0.0))
            throw ParamError(Stage::models, "kappa must be positive");
        if (!(dilation_0 > 0.0))
            throw ParamError(Stage::models, "dilation must be positive");
        if (!(gamma >= 1.0))
            throw ParamError(Stage::models, "gamma must be >= 1");
        if (theta < 0.0)
            throw ParamError(Stage::models, "theta must be non-negative");
        if (!(w >= 0.0 && w <= 1.0))
            throw ParamError(Stage::models, "w must be in [0, 1]");
        if (!(ma_window_s > 0.0))
            throw ParamError(Stage::models, "moving-average window must be positive");
        if (!(limit_lo < limit_hi))
            throw ParamError(Stage::models, "range limits must satisfy lo < hi");
        if (timbre_J < 1)
            throw ParamError(Stage::models, "timbre needs at least one partial");
        if (!(gain_over > 0.0) || !(gain_under > 0.0))
            throw ParamError(Stage::models, "timbre gains must be positive");
        if (!(area_threshold > 0.0))
            throw ParamError(Stage::models, "area threshold must be positive");
        if (!(sigma >= 1.0))
            throw ParamError(Stage::models, "sigma must be >= 1");
        if (!(tau_factor > 0.0))
            throw ParamError(Stage::models, "tau factor must be positive");
        if (!(audio_rate_hz > 0.0))
            throw ParamError(Stage::models, "audio rate must be positive");
        if (peak_dbfs > 0.0)
            throw ParamError(Stage::models, "peak level must be <= 0 dBFS");
    }

    static SonificationParams preset(Model m) {
        SonificationParams p; // defaults are the basic model
        p.model = m;
        switch (m) {
        case Model::basic:
            break;
        case Model::itr:
        case Model::adv:
            p.kappa = 15.0;
            p.theta = 0.1;
            break;
        case Model::audify:
            p.kappa = 1.0;
            break;
        }
        return p;
    }
};

enum class SegmentClass { normal, overshoot, undershoot };

inline const char* segment_class_name(SegmentClass c) {
    switch (c) {
    case SegmentClass::normal: return "normal";
    case SegmentClass::overshoot: return "overshoot";
    case SegmentClass::undershoot: return "undershoot";
    }
    return "?";
}

// Absolute-range classification on the raw values. A segment that manages to
// breach both limits counts as an overshoot (loss of control upward is the
// more urgent signal) and is reported on stderr.
inline SegmentClass classify_segment(const Segment& seg, double limit_lo, double limit_hi) {
    if (!(limit_lo < limit_hi))
        throw ParamError(Stage::models, "range limits must satisfy lo < hi");
    double mn = seg.raw.front(), mx = seg.raw.front();
    for (double v : seg.raw) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    const bool over = mx > limit_hi;
    const bool under = mn < limit_lo;
    if (over && under)
        std::cerr << "dsson: warning: segment " << seg.index
                  << " breaches both range limits; classified as overshoot\n";
    if (over)
        return SegmentClass::overshoot;
    if (under)
        return SegmentClass::undershoot;
    return SegmentClass::normal;
}

namespace detail {

inline SonicEvent render_segment(const Segment& seg, const SonificationParams& p) {
    double dilation = p.dilation_0;
    std::vector<double> am;
    TimbreSpec timbre; // identity

    switch (p.model) {
    case Model::basic:
        am = am_magnitude(seg, dilation, p.gamma, p.audio_rate_hz);
        break;
    case Model::itr:
        am = am_gate(seg, dilation, p.theta, p.audio_rate_hz);
        break;
    case Model::adv: {
        const SegmentClass cls = classify_segment(seg, p.limit_lo, p.limit_hi);
        if (cls == SegmentClass::normal) {
            am = am_gate(seg, dilation, p.theta, p.audio_rate_hz);
        } else {
            dilation = dilation_for_segment(seg, p.dilation_0, p.sigma, p.area_threshold, true);
            am = am_envelope(seg, dilation, p.tau_factor, p.audio_rate_hz);
            timbre.kind =
                cls == SegmentClass::overshoot ? TimbreKind::harmonic : TimbreKind::subharmonic;
            timbre.partial_count_J = p.timbre_J;
            timbre.rolloff_nu = p.timbre_nu;
            timbre.gain_c = cls == SegmentClass::overshoot ? p.gain_over : p.gain_under;
        }
        break;
    }
    case Model::audify:
        throw InternalError(Stage::models, "audify has no per-segment renderer");
    }

    const std::vector<double> b = pitch_exponent(seg, dilation, p.pitch, p.audio_rate_hz);
    SonicEvent ev = synthesize_event(seg, am, b, p.pitch, timbre, p.audio_rate_hz);
    ev.onset_s = seg.start_time_s / p.kappa;
    return ev;
}

} // namespace detail

// Full per-segment pipeline over an ingested series: weighted trend,
// detrend, cut, then one sonic event per segment (synthesis fans out over
// n_threads; results are keyed by segment index so the outcome is identical
// for any worker count).
inline std::vector<SonicEvent> render_model(const TimeSeries& ts, const SonificationParams& p,
                                            unsigned n_threads = 1) {
    p.validate();
    if (p.model == Model::audify)
        throw ParamError(Stage::models, "use render_audify for the audify model");

    const std::vector<double> ma = moving_average(ts, p.ma_window_s);
    const std::vector<double> trend = weighted_trend(ma, p.x_target, p.w);
    const TrendDecomposition decomp = detrend(ts, trend);
    const std::vector<std::size_t> cuts = find_cutting_points(decomp.ac);
    const std::vector<Segment> segments = extract_segments(decomp, ts, cuts);

    std::vector<SonicEvent> events(segments.size());
    std::vector<std::exception_ptr> errors(segments.size());

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                events[i] = detail::render_segment(segments[i], p);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (n_threads <= 1 || segments.size() < 2) {
        work(0, segments.size());
    } else {
        const std::size_t nt = std::min<std::size_t>(n_threads, segments.size());
        std::vector<std::thread> pool;
        const std::size_t chunk = (segments.size() + nt - 1) / nt;
        for (std::size_t t = 0; t < nt; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(begin + chunk, segments.size());
            if (begin < end)
                pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return events;
}

// Degenerate mode: every data point becomes its own single-sample event, so
// the mixdown reproduces the sequence as audio at the playback rate.
inline std::vector<SonicEvent> render_audify(const TimeSeries& ts, double playback_rate_hz) {
    if (!(playback_rate_hz > 0.0))
        throw ParamError(Stage::models, "playback rate must be positive");
    std::vector<SonicEvent> events(ts.count());
    for (std::size_t n = 0; n < ts.count(); ++n) {
        events[n].onset_s = static_cast<double>(n) / playback_rate_hz;
        events[n].audio = {ts.samples[n]};
        events[n].audio_rate_hz = playback_rate_hz;
        events[n].source_index = n + 1;
    }
    return events;
}

struct FlatTop {
    double start_s = 0.0;
    double duration_s = 0.0;
};

// Maximal stretches in which every min_duration_s sub-window varies by at
// most max_range. Sliding min/max over monotonic deques, one pass.
inline std::vector<FlatTop> detect_flat_tops(const TimeSeries& ts, double min_duration_s = 0.5,
                                             double max_range = 0.02) {
    if (!(min_duration_s > 0.0))
        throw ParamError(Stage::models, "minimum duration must be positive");
    if (max_range < 0.0)
        throw ParamError(Stage::models, "range bound must be non-negative");
    const auto n = ts.count();
    const auto win = static_cast<std::size_t>(std::lround(min_duration_s * ts.sample_rate_hz));
    std::vector<FlatTop> tops;
    if (win < 1 || win > n)
        return tops;

    // tight[k]: does the window starting at sample k stay within max_range?
    const std::size_t n_windows = n - win + 1;
    std::vector<char> tight(n_windows, 0);
    std::vector<std::size_t> min_q, max_q; // index deques
    std::size_t min_head = 0, max_head = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (min_q.size() > min_head && ts.samples[min_q.back()] >= ts.samples[i])
            min_q.pop_back();
        min_q.push_back(i);
        while (max_q.size() > max_head && ts.samples[max_q.back()] <= ts.samples[i])
            max_q.pop_back();
        max_q.push_back(i);
        if (i + 1 >= win) {
            const std::size_t k = i + 1 - win;
            if (min_q[min_head] < k)
                ++min_head;
            if (max_q[max_head] < k)
                ++max_head;
            tight[k] = ts.samples[max_q[max_head]] - ts.samples[min_q[min_head]] <= max_range;
        }
    }

    for (std::size_t k = 0; k < n_windows;) {
        if (!tight[k]) {
            ++k;
            continue;
        }
        std::size_t end = k;
        while (end + 1 < n_windows && tight[end + 1])
            ++end;
        tops.push_back({static_cast<double>(k) / ts.sample_rate_hz,
                        static_cast<double>(end - k + win) / ts.sample_rate_hz});
        k = end + 1;
    }
    return tops;
}

enum class ExcursionKind { overshoot, undershoot, deviation };

inline const char* excursion_kind_name(ExcursionKind k) {
    switch (k) {
    case ExcursionKind::overshoot: return "overshoot";
    case ExcursionKind::undershoot: return "undershoot";
    case ExcursionKind::deviation: return "deviation";
    }
    return "?";
}

struct Excursion {
    double start_s = 0.0;
    double duration_s = 0.0;
    ExcursionKind kind = ExcursionKind::deviation;
    std::size_t segment_index = 0;
};

// Report rows for the analyze command: per-segment range breaches plus
// target-deviation breaches (peak |AC| >= theta).
inline std::vector<Excursion> detect_excursions(const TimeSeries& ts,
                                                const std::vector<double>& trend, double theta,
                                                double limit_lo = 0.2, double limit_hi = 0.6) {
    const TrendDecomposition decomp = detrend(ts, trend);
    const std::vector<std::size_t> cuts = find_cutting_points(decomp.ac);
    const std::vector<Segment> segments = extract_segments(decomp, ts, cuts);
    std::vector<Excursion> rows;
    for (const Segment& seg : segments) {
        const SegmentClass cls = classify_segment(seg, limit_lo, limit_hi);
        if (cls == SegmentClass::overshoot)
            rows.push_back({seg.start_time_s, seg.duration_s, ExcursionKind::overshoot, seg.index});
        else if (cls == SegmentClass::undershoot)
            rows.push_back(
                {seg.start_time_s, seg.duration_s, ExcursionKind::undershoot, seg.index});
        if (seg.max_mag >= theta)
            rows.push_back({seg.start_time_s, seg.duration_s, ExcursionKind::deviation, seg.index});
    }
    return rows;
}

} // namespace dsson
