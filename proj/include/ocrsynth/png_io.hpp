// png_io.hpp - 8-bit grayscale PNG encode/decode (libpng).

#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "ocrsynth/image.hpp"

namespace ocrsynth {

/// Deterministic bytes: fixed compression settings, no timestamps.
std::vector<std::uint8_t> encode_png(const RasterImage& img);
void write_png(const std::filesystem::path& path, const RasterImage& img);

/// Any PNG color type is converted to 8-bit luminance.
RasterImage decode_png(const std::vector<std::uint8_t>& bytes);
RasterImage read_png(const std::filesystem::path& path);

/// (width, height) from the IHDR chunk without decoding pixels.
std::pair<int, int> png_dimensions(const std::filesystem::path& path);

}  // namespace ocrsynth
