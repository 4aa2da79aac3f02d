#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "dsson/error.hpp"

// Minimal RIFF/WAVE reader and writer. Mono only; PCM16 and IEEE float32.

namespace dsson::wav {

enum class SampleFormat { pcm16, float32 };

struct File {
    SampleFormat format = SampleFormat::pcm16;
    std::uint32_t sample_rate_hz = 0;
    std::vector<std::int16_t> pcm16;
    std::vector<float> f32;

    std::size_t frame_count() const {
        return format == SampleFormat::pcm16 ? pcm16.size() : f32.size();
    }
};

namespace detail {

inline void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(Stage::mixdown, "cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError(Stage::mixdown, "short write to '" + path + "'");
}

// fmt + optional fact + data, wrapped in RIFF.
inline std::string container(std::uint16_t audio_format, std::uint16_t bits,
                             std::uint32_t sample_rate, std::uint32_t frames,
                             const std::string& data) {
    const std::uint16_t block_align = static_cast<std::uint16_t>(bits / 8);
    std::string body;
    body += "WAVE";
    body += "fmt ";
    put_u32(body, 16);
    put_u16(body, audio_format);
    put_u16(body, 1); // mono
    put_u32(body, sample_rate);
    put_u32(body, sample_rate * block_align);
    put_u16(body, block_align);
    put_u16(body, bits);
    if (audio_format == 3) { // IEEE float carries a fact chunk
        body += "fact";
        put_u32(body, 4);
        put_u32(body, frames);
    }
    body += "data";
    put_u32(body, static_cast<std::uint32_t>(data.size()));
    body += data;
    if (data.size() % 2 != 0)
        body.push_back('\0'); // chunk padding

    std::string out;
    out += "RIFF";
    put_u32(out, static_cast<std::uint32_t>(body.size()));
    out += body;
    return out;
}

} // namespace detail

inline void write_pcm16(const std::string& path, const std::vector<std::int16_t>& samples,
                        std::uint32_t sample_rate_hz) {
    std::string data;
    data.reserve(samples.size() * 2);
    for (std::int16_t s : samples)
        detail::put_u16(data, static_cast<std::uint16_t>(s));
    detail::write_file(path, detail::container(1, 16, sample_rate_hz,
                                               static_cast<std::uint32_t>(samples.size()), data));
}

inline void write_float32(const std::string& path, const std::vector<float>& samples,
                          std::uint32_t sample_rate_hz) {
    std::string data;
    data.reserve(samples.size() * 4);
    for (float s : samples) {
        std::uint32_t bits;
        std::memcpy(&bits, &s, 4);
        detail::put_u32(data, bits);
    }
    detail::write_file(path, detail::container(3, 32, sample_rate_hz,
                                               static_cast<std::uint32_t>(samples.size()), data));
}

inline File read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(Stage::ingest, "cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t n = bytes.size();

    if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
        throw FormatError(Stage::ingest, "'" + path + "' is not a RIFF/WAVE file");

    std::uint16_t audio_format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    bool have_fmt = false;
    std::size_t data_off = 0, data_len = 0;

    std::size_t off = 12;
    while (off + 8 <= n) {
        const char* id = bytes.data() + off;
        const std::uint32_t len = detail::get_u32(p + off + 4);
        const std::size_t payload = off + 8;
        if (payload + len > n)
            throw IoError(Stage::ingest, "'" + path + "' is truncated");
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16)
                throw FormatError(Stage::ingest, "fmt chunk too short");
            audio_format = detail::get_u16(p + payload);
            channels = detail::get_u16(p + payload + 2);
            sample_rate = detail::get_u32(p + payload + 4);
            bits = detail::get_u16(p + payload + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data_off = payload;
            data_len = len;
        }
        off = payload + len + (len % 2); // chunks are word-aligned
    }

    if (!have_fmt || data_off == 0)
        throw IoError(Stage::ingest, "'" + path + "' has no fmt/data chunk");
    if (channels != 1)
        throw FormatError(Stage::ingest, "only mono input is supported, got " +
                                             std::to_string(channels) + " channels");

    File f;
    f.sample_rate_hz = sample_rate;
    if (audio_format == 1 && bits == 16) {
        f.format = SampleFormat::pcm16;
        f.pcm16.resize(data_len / 2);
        for (std::size_t i = 0; i < f.pcm16.size(); ++i)
            f.pcm16[i] = static_cast<std::int16_t>(detail::get_u16(p + data_off + 2 * i));
    } else if (audio_format == 3 && bits == 32) {
        f.format = SampleFormat::float32;
        f.f32.resize(data_len / 4);
        for (std::size_t i = 0; i < f.f32.size(); ++i) {
            std::uint32_t u = detail::get_u32(p + data_off + 4 * i);
            std::memcpy(&f.f32[i], &u, 4);
        }
    } else {
        throw FormatError(Stage::ingest, "unsupported sample format (" +
                                             std::to_string(audio_format) + "/" +
                                             std::to_string(bits) + " bit); expected PCM16 or float32");
    }
    return f;
}

} // namespace dsson::wav
