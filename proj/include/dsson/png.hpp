#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "dsson/error.hpp"

// 8-bit grayscale PNG writer: IHDR + one zlib-compressed IDAT + IEND,
// scanlines unfiltered. zlib does the heavy lifting.

namespace dsson::png {

namespace detail {

inline void put_u32be(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

inline void put_chunk(std::string& out, const char type[4], const std::string& data) {
    put_u32be(out, static_cast<std::uint32_t>(data.size()));
    std::string body(type, 4);
    body += data;
    out += body;
    const auto crc = ::crc32(0, reinterpret_cast<const Bytef*>(body.data()),
                             static_cast<uInt>(body.size()));
    put_u32be(out, static_cast<std::uint32_t>(crc));
}

} // namespace detail

// pixels: row-major, top row first, one byte per pixel.
inline void write_gray8(const std::string& path, std::size_t width, std::size_t height,
                        const std::vector<std::uint8_t>& pixels) {
    if (width == 0 || height == 0 || pixels.size() != width * height)
        throw ParamError(Stage::mixdown, "bad image dimensions");

    std::string raw;
    raw.reserve(height * (width + 1));
    for (std::size_t y = 0; y < height; ++y) {
        raw.push_back('\0'); // filter type: none
        raw.append(reinterpret_cast<const char*>(pixels.data() + y * width), width);
    }

    uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
    std::string compressed(bound, '\0');
    if (::compress2(reinterpret_cast<Bytef*>(compressed.data()), &bound,
                    reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                    Z_DEFAULT_COMPRESSION) != Z_OK)
        throw InternalError(Stage::mixdown, "zlib compression failed");
    compressed.resize(bound);

    std::string ihdr;
    detail::put_u32be(ihdr, static_cast<std::uint32_t>(width));
    detail::put_u32be(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);    // bit depth
    ihdr.push_back(0);    // grayscale
    ihdr.push_back(0);    // deflate
    ihdr.push_back(0);    // adaptive filtering
    ihdr.push_back(0);    // no interlace

    std::string out("\x89PNG\r\n\x1a\n", 8);
    detail::put_chunk(out, "IHDR", ihdr);
    detail::put_chunk(out, "IDAT", compressed);
    detail::put_chunk(out, "IEND", "");

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError(Stage::mixdown, "cannot open '" + path + "' for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f)
        throw IoError(Stage::mixdown, "short write to '" + path + "'");
}

} // namespace dsson::png
