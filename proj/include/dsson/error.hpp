#pragma once

#include <stdexcept>
#include <string>

namespace dsson {

// Pipeline stage that raised the error; the CLI reports it and maps it
// to an exit code (usage/IO -> 2, everything else -> 1).
enum class Stage { ingest, trend, segmentation, synth, models, mixdown, cli };

inline const char* stage_name(Stage s) {
    switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::trend: return "trend";
    case Stage::segmentation: return "segmentation";
    case Stage::synth: return "synth";
    case Stage::models: return "models";
    case Stage::mixdown: return "mixdown";
    case Stage::cli: return "cli";
    }
    return "?";
}

class Error : public std::runtime_error {
public:
    Error(Stage stage, const std::string& msg)
        : std::runtime_error(std::string(stage_name(stage)) + ": " + msg), stage_(stage) {}
    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

// Input file unreadable, missing or structurally broken.
class IoError : public Error {
public:
    using Error::Error;
};

// A row or field of a text input could not be interpreted.
class ParseError : public Error {
public:
    ParseError(Stage stage, std::size_t line, const std::string& msg)
        : Error(stage, "line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

// Well-formed input that violates a structural requirement
// (non-uniform sample spacing, wrong channel count, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

// Out-of-range or inconsistent parameter value.
class ParamError : public Error {
public:
    using Error::Error;
};

// Instantaneous synthesis frequency reached the Nyquist limit.
class AliasingError : public Error {
public:
    AliasingError(std::size_t segment_index, double peak_hz, double audio_rate_hz)
        : Error(Stage::synth,
                "segment " + std::to_string(segment_index) + ": instantaneous frequency " +
                    std::to_string(peak_hz) + " Hz reaches Nyquist (" +
                    std::to_string(audio_rate_hz / 2.0) + " Hz)"),
          segment_index_(segment_index), peak_hz_(peak_hz) {}
    std::size_t segment_index() const { return segment_index_; }
    double peak_hz() const { return peak_hz_; }

private:
    std::size_t segment_index_;
    double peak_hz_;
};

// Violated internal contract (e.g. cut indices out of order).
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace dsson
