#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsson/error.hpp"
#include "dsson/time_series.hpp"
#include "dsson/wav.hpp"

namespace dsson {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty())
        return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

} // namespace detail

// Sample rate source for CSV input: either stated explicitly or inferred
// from a leading time column.
struct CsvRate {
    static CsvRate from_time_column() { return {}; }
    static CsvRate fixed(double hz) {
        CsvRate r;
        r.rate_hz = hz;
        return r;
    }
    std::optional<double> rate_hz;
};

// Accepts one numeric column (value) with an explicit rate, or two columns
// (time_s, value) with uniform spacing. A non-numeric first row is treated
// as a header. Uniformity tolerance is 1e-6 relative.
inline TimeSeries load_csv(const std::string& path, CsvRate rate) {
    std::ifstream in(path);
    if (!in)
        throw IoError(Stage::ingest, "cannot open '" + path + "'");

    std::vector<double> times, values;
    std::string line;
    std::size_t line_no = 0;
    bool header_allowed = true; // only the very first non-blank row may be a header
    std::size_t n_cols = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::trim(line);
        if (line_no == 1 && sv.size() >= 3 && sv.substr(0, 3) == "\xEF\xBB\xBF")
            sv.remove_prefix(3); // UTF-8 BOM
        if (sv.empty())
            continue;
        auto fields = detail::split_csv(sv);
        if (header_allowed) {
            header_allowed = false;
            bool numeric = true;
            for (auto f : fields)
                numeric = numeric && detail::parse_double(f).has_value();
            if (!numeric)
                continue; // header row
        }
        if (n_cols == 0) {
            n_cols = fields.size();
            if (n_cols != 1 && n_cols != 2)
                throw FormatError(Stage::ingest,
                                  "expected 1 (value) or 2 (time,value) columns, got " +
                                      std::to_string(n_cols));
        }
        if (fields.size() != n_cols)
            throw ParseError(Stage::ingest, line_no,
                             "expected " + std::to_string(n_cols) + " columns, got " +
                                 std::to_string(fields.size()));
        std::vector<double> row;
        for (auto f : fields) {
            auto v = detail::parse_double(f);
            if (!v)
                throw ParseError(Stage::ingest, line_no,
                                 "non-numeric field '" + std::string(detail::trim(f)) + "'");
            row.push_back(*v);
        }
        if (n_cols == 2) {
            times.push_back(row[0]);
            values.push_back(row[1]);
        } else {
            values.push_back(row[0]);
        }
    }

    if (values.empty())
        throw FormatError(Stage::ingest, "'" + path + "' contains no data rows");
    if (values.size() < 2)
        throw FormatError(Stage::ingest, "'" + path + "' has fewer than 2 samples");

    double rate_hz = 0.0;
    if (!times.empty()) {
        const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
        if (!(dt > 0.0))
            throw FormatError(Stage::ingest, "time column is not strictly increasing");
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double step = times[i] - times[i - 1];
            if (!(step > 0.0))
                throw FormatError(Stage::ingest, "time column is not strictly increasing at row " +
                                                     std::to_string(i + 1));
            if (std::abs(step - dt) > 1e-6 * dt)
                throw FormatError(Stage::ingest,
                                  "non-uniform sample spacing: step " + std::to_string(step) +
                                      " s vs mean " + std::to_string(dt) + " s");
        }
        rate_hz = 1.0 / dt;
        if (rate.rate_hz && std::abs(*rate.rate_hz - rate_hz) > 1e-6 * rate_hz)
            throw FormatError(Stage::ingest, "stated rate " + std::to_string(*rate.rate_hz) +
                                                 " Hz disagrees with time column (" +
                                                 std::to_string(rate_hz) + " Hz)");
    } else {
        if (!rate.rate_hz)
            throw ParamError(Stage::ingest,
                             "single-column input needs an explicit sample rate");
        rate_hz = *rate.rate_hz;
    }
    return TimeSeries(std::move(values), rate_hz);
}

// Inverse of the audification storage step: integer/32768 * full_scale_value.
inline TimeSeries load_wav_pcm16(const std::string& path, double full_scale_value = 2.0) {
    if (!(full_scale_value > 0.0))
        throw ParamError(Stage::ingest, "full scale value must be positive");
    wav::File f = wav::read(path);
    if (f.format != wav::SampleFormat::pcm16)
        throw FormatError(Stage::ingest, "'" + path + "' is not 16-bit PCM");
    std::vector<double> samples(f.pcm16.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = static_cast<double>(f.pcm16[i]) / 32768.0 * full_scale_value;
    return TimeSeries(std::move(samples), static_cast<double>(f.sample_rate_hz));
}

// Audification storage: data values quantized to int16 against full_scale_value.
// Round-trips exactly with load_wav_pcm16 for values that came from int16.
inline void write_wav_pcm16(const TimeSeries& ts, const std::string& path,
                            double full_scale_value = 2.0) {
    if (!(full_scale_value > 0.0))
        throw ParamError(Stage::ingest, "full scale value must be positive");
    std::vector<std::int16_t> pcm(ts.count());
    for (std::size_t i = 0; i < pcm.size(); ++i) {
        double q = std::round(ts.samples[i] / full_scale_value * 32768.0);
        if (q > 32767.0)
            q = 32767.0;
        if (q < -32768.0)
            q = -32768.0;
        pcm[i] = static_cast<std::int16_t>(q);
    }
    wav::write_pcm16(path, pcm, static_cast<std::uint32_t>(std::lround(ts.sample_rate_hz)));
}

// Block-averaging decimation. The source rate must be an integer multiple of
// the target; each output sample is the mean of one block, trailing partial
// block dropped. Block means double as the anti-alias filter, which is enough
// for signals band-limited well below the target Nyquist.
inline TimeSeries downsample(const TimeSeries& ts, double target_rate_hz) {
    if (!(target_rate_hz > 0.0))
        throw ParamError(Stage::ingest, "target rate must be positive");
    const double ratio = ts.sample_rate_hz / target_rate_hz;
    const auto m = static_cast<std::size_t>(std::lround(ratio));
    if (m < 1 || std::abs(ratio - static_cast<double>(m)) > 1e-9 * ratio)
        throw ParamError(Stage::ingest, "decimation ratio " + std::to_string(ratio) +
                                            " is not a positive integer");
    if (m == 1)
        return ts;
    const std::size_t blocks = ts.count() / m;
    std::vector<double> out(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            acc += ts.samples[b * m + j];
        out[b] = acc / static_cast<double>(m);
    }
    return TimeSeries(std::move(out), target_rate_hz);
}

// Triangular smoothing with unity DC gain; length 3 kernel is [1 2 1]/4.
// Edges are handled by replicating the boundary samples, so the output
// length equals the input length.
inline TimeSeries bartlett_smooth(const TimeSeries& ts, std::size_t window_len_samples) {
    const std::size_t len = window_len_samples;
    if (len < 3 || len % 2 == 0)
        throw ParamError(Stage::ingest, "window length must be odd and >= 3, got " +
                                            std::to_string(len));
    if (len > ts.count())
        throw ParamError(Stage::ingest, "window length " + std::to_string(len) +
                                            " exceeds sample count " + std::to_string(ts.count()));
    const std::size_t h = (len - 1) / 2;
    std::vector<double> kernel(len);
    const double norm = static_cast<double>((h + 1) * (h + 1));
    for (std::size_t j = 0; j < len; ++j) {
        const double tri = static_cast<double>(h + 1) -
                           std::abs(static_cast<double>(j) - static_cast<double>(h));
        kernel[j] = tri / norm;
    }

    const auto n = static_cast<std::ptrdiff_t>(ts.count());
    std::vector<double> out(ts.count());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
            std::ptrdiff_t k = i + static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(h);
            if (k < 0)
                k = 0;
            if (k > n - 1)
                k = n - 1;
            acc += kernel[j] * ts.samples[static_cast<std::size_t>(k)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return TimeSeries(std::move(out), ts.sample_rate_hz);
}

} // namespace dsson
