// image.hpp - 8-bit single-channel raster image.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ocrsynth {

/// Row-major 8-bit luminance; 255 is white background, 0 is black ink.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  RasterImage(int w, int h, std::uint8_t fill = 255)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }

  bool operator==(const RasterImage&) const = default;
};

/// Pixels strictly darker than `threshold`.
std::size_t count_below(const RasterImage& img, std::uint8_t threshold);

}  // namespace ocrsynth
