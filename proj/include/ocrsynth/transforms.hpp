// transforms.hpp - scan-artifact corruptions: binarize, bold, pixelate, pad.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocrsynth/image.hpp"
#include "ocrsynth/random.hpp"

namespace ocrsynth {

struct TransformConfig {
  double pixelate_low = 1.5;
  double pixelate_high = 3.0;
  int bold_n = 2;
  std::uint8_t binarize_threshold = 128;
  int pad_max = 40;
  double p_bold = 0.5;  // binarize + bold
  double p_pixelate = 0.5;
  double p_pad = 0.5;

  /// Throws Error(Config).
  void validate() const;
};

/// Down to (floor(w/f), floor(h/f)) and back up, both bilinear with
/// half-pixel centres. factor == 1 is the identity. Throws
/// Error(InvalidFactor) when factor < 1 or a reduced side would be < 1 px.
RasterImage pixelate(const RasterImage& img, double factor);

/// pixel < threshold -> 0, else 255.
RasterImage binarize(const RasterImage& img, std::uint8_t threshold = 128);

/// White pixels with at least n black pixels within Chebyshev distance n
/// turn black; every decision reads the input. Throws Error(Contract) when
/// the input is not binary or n < 1.
RasterImage bold(const RasterImage& img, int n);

/// Adds white columns on the left and right.
RasterImage pad_columns(const RasterImage& img, int left, int right);

/// Draws left then right uniformly in [0, pad_max].
RasterImage pad(const RasterImage& img, RandomSource& rng, int pad_max);

struct PipelineResult {
  RasterImage image;
  std::vector<std::string> applied;  // e.g. {"bold", "pixelate", "pad"}
};

/// Order: binarize+bold, pixelate, pad. The three on/off decisions are drawn
/// up front, then the pixelate factor and the padding widths.
PipelineResult apply_pipeline(const RasterImage& img, const TransformConfig& cfg,
                              RandomSource& rng);

}  // namespace ocrsynth
