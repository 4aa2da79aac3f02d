#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "dsson/error.hpp"
#include "dsson/fft.hpp"
#include "dsson/png.hpp"
#include "dsson/synth.hpp"
#include "dsson/wav.hpp"

namespace dsson {

struct RenderedAudio {
    std::vector<double> samples;
    double audio_rate_hz = 0.0;
    double applied_gain = 1.0; // cumulative linear normalization factor
};

// Overlap-add of the sonic events at sample offset round(onset * rate).
// Accumulation runs in ascending source_index order so the float result is
// identical no matter how the events were produced.
inline RenderedAudio schedule_and_sum(const std::vector<SonicEvent>& events,
                                      double audio_rate_hz) {
    if (!(audio_rate_hz > 0.0))
        throw ParamError(Stage::mixdown, "audio rate must be positive");

    std::size_t total = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const SonicEvent& ev = events[i];
        if (i > 0 && ev.source_index < events[i - 1].source_index)
            throw InternalError(Stage::mixdown, "events not ordered by source index");
        if (ev.onset_s < 0.0)
            throw InternalError(Stage::mixdown, "negative onset for event " +
                                                    std::to_string(ev.source_index));
        if (ev.audio_rate_hz != audio_rate_hz)
            throw InternalError(Stage::mixdown, "event " + std::to_string(ev.source_index) +
                                                    " rendered at a different rate");
        const auto offset = static_cast<std::size_t>(std::llround(ev.onset_s * audio_rate_hz));
        total = std::max(total, offset + ev.audio.size());
    }

    RenderedAudio out;
    out.audio_rate_hz = audio_rate_hz;
    out.samples.assign(total, 0.0);
    for (const SonicEvent& ev : events) {
        const auto offset = static_cast<std::size_t>(std::llround(ev.onset_s * audio_rate_hz));
        for (std::size_t k = 0; k < ev.audio.size(); ++k)
            out.samples[offset + k] += ev.audio[k];
    }
    return out;
}

// Scale so the peak hits 10^(peak_dbfs/20). An all-zero mix passes through
// with gain 1.
inline RenderedAudio normalize(RenderedAudio audio, double peak_dbfs) {
    if (peak_dbfs > 0.0)
        throw ParamError(Stage::mixdown, "peak level must be <= 0 dBFS");
    double peak = 0.0;
    for (double s : audio.samples)
        peak = std::max(peak, std::abs(s));
    if (peak == 0.0)
        return audio;
    const double gain = std::pow(10.0, peak_dbfs / 20.0) / peak;
    for (double& s : audio.samples)
        s *= gain;
    audio.applied_gain *= gain;
    return audio;
}

enum class BitDepth { pcm16, float32 };

// 16-bit output quantizes with round-to-nearest and a symmetric clamp at
// +/-32767; callers normalize first, anything beyond full scale is an error.
inline void write_wav(const RenderedAudio& audio, const std::string& path, BitDepth depth) {
    const auto rate = static_cast<std::uint32_t>(std::lround(audio.audio_rate_hz));
    if (depth == BitDepth::pcm16) {
        std::vector<std::int16_t> pcm(audio.samples.size());
        for (std::size_t i = 0; i < pcm.size(); ++i) {
            const double s = audio.samples[i];
            if (std::abs(s) > 1.0)
                throw ParamError(Stage::mixdown,
                                 "sample " + std::to_string(i) + " out of [-1, 1] (" +
                                     std::to_string(s) + "); normalize before 16-bit output");
            const double q = std::clamp(std::round(s * 32768.0), -32767.0, 32767.0);
            pcm[i] = static_cast<std::int16_t>(q);
        }
        wav::write_pcm16(path, pcm, rate);
    } else {
        std::vector<float> f32(audio.samples.begin(), audio.samples.end());
        wav::write_float32(path, f32, rate);
    }
}

// Magnitude STFT frames (Hann window), row-major [frame][bin].
struct Stft {
    std::vector<std::vector<double>> frames;
    double bin_hz = 0.0;
    double hop_s = 0.0;
    std::size_t window_len = 0;
};

inline Stft stft_magnitudes(const std::vector<double>& samples, double rate_hz,
                            double window_s = 0.023, double overlap = 0.75) {
    if (!(window_s > 0.0) || !(overlap >= 0.0 && overlap < 1.0))
        throw ParamError(Stage::mixdown, "bad STFT window/overlap");
    const auto win = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::lround(window_s * rate_hz)));
    const auto hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(static_cast<double>(win) * (1.0 - overlap))));
    const std::size_t nfft = next_pow2(win);

    std::vector<double> hann(win);
    for (std::size_t i = 0; i < win; ++i)
        hann[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                        static_cast<double>(win - 1)));

    Stft st;
    st.bin_hz = rate_hz / static_cast<double>(nfft);
    st.hop_s = static_cast<double>(hop) / rate_hz;
    st.window_len = win;

    const std::size_t n_frames =
        samples.size() >= win ? 1 + (samples.size() - win) / hop : 1;
    st.frames.reserve(n_frames);
    std::vector<double> block(win);
    for (std::size_t f = 0; f < n_frames; ++f) {
        const std::size_t start = f * hop;
        for (std::size_t i = 0; i < win; ++i) {
            const std::size_t k = start + i;
            block[i] = k < samples.size() ? samples[k] * hann[i] : 0.0;
        }
        st.frames.push_back(magnitude_spectrum(block, nfft));
    }
    return st;
}

// Log-amplitude grayscale spectrogram, time left-to-right, frequency bottom-up,
// 80 dB dynamic range below the global peak.
inline void spectrogram_png(const RenderedAudio& audio, const std::string& path,
                            double window_s = 0.023, double overlap = 0.75,
                            double max_freq_hz = 4000.0) {
    const Stft st = stft_magnitudes(audio.samples, audio.audio_rate_hz, window_s, overlap);
    const std::size_t all_bins = st.frames.empty() ? 0 : st.frames.front().size();
    std::size_t bins = 0;
    while (bins < all_bins && static_cast<double>(bins) * st.bin_hz <= max_freq_hz)
        ++bins;
    if (bins == 0 || st.frames.empty())
        throw ParamError(Stage::mixdown, "empty spectrogram");

    double peak = 0.0;
    for (const auto& fr : st.frames)
        for (std::size_t k = 0; k < bins; ++k)
            peak = std::max(peak, fr[k]);

    constexpr double kRangeDb = 80.0;
    const std::size_t width = st.frames.size(), height = bins;
    std::vector<std::uint8_t> pixels(width * height, 0);
    if (peak > 0.0) {
        for (std::size_t x = 0; x < width; ++x) {
            for (std::size_t k = 0; k < bins; ++k) {
                const double mag = st.frames[x][k];
                double db = mag > 0.0 ? 20.0 * std::log10(mag / peak) : -kRangeDb;
                db = std::clamp(db, -kRangeDb, 0.0);
                const auto level = static_cast<std::uint8_t>(
                    std::lround((db + kRangeDb) / kRangeDb * 255.0));
                const std::size_t y = height - 1 - k; // top row = highest frequency
                pixels[y * width + x] = level;
            }
        }
    }
    png::write_gray8(path, width, height, pixels);
}

} // namespace dsson
