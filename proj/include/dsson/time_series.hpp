#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "dsson/error.hpp"

namespace dsson {

// Uniformly sampled real-valued signal. Values are in application units
// (revolution rate in Hz for the exercise-device data this was built for).
struct TimeSeries {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;

    TimeSeries() = default;

    TimeSeries(std::vector<double> s, double rate_hz)
        : samples(std::move(s)), sample_rate_hz(rate_hz) {
        validate(Stage::ingest);
    }

    std::size_t count() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }

    // No NaN/Inf is admitted past construction; downstream code relies on it.
    void validate(Stage stage) const {
        if (!(sample_rate_hz > 0.0))
            throw ParamError(stage, "sample rate must be positive");
        if (samples.size() < 2)
            throw FormatError(stage, "need at least 2 samples, got " + std::to_string(samples.size()));
        for (std::size_t n = 0; n < samples.size(); ++n)
            if (!std::isfinite(samples[n]))
                throw FormatError(stage, "non-finite sample at index " + std::to_string(n));
    }
};

} // namespace dsson
