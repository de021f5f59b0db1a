// transforms.cpp

#include "ocrsynth/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "ocrsynth/error.hpp"

namespace ocrsynth {
namespace {

/// Bilinear resample of a float plane, half-pixel centres, edge clamp.
std::vector<double> resample(const std::vector<double>& src, int sw, int sh, int dw,
                             int dh) {
  std::vector<double> dst(static_cast<std::size_t>(dw) * static_cast<std::size_t>(dh));
  const double sx = static_cast<double>(sw) / dw;
  const double sy = static_cast<double>(sh) / dh;
  auto at = [&](int x, int y) {
    return src[static_cast<std::size_t>(y) * static_cast<std::size_t>(sw) +
               static_cast<std::size_t>(x)];
  };
  for (int y = 0; y < dh; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(sh - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, sh - 1);
    const double ty = fy - y0;
    for (int x = 0; x < dw; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(sw - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, sw - 1);
      const double tx = fx - x0;
      const double top = at(x0, y0) * (1 - tx) + at(x1, y0) * tx;
      const double bottom = at(x0, y1) * (1 - tx) + at(x1, y1) * tx;
      dst[static_cast<std::size_t>(y) * static_cast<std::size_t>(dw) +
          static_cast<std::size_t>(x)] = top * (1 - ty) + bottom * ty;
    }
  }
  return dst;
}

}  // namespace

void TransformConfig::validate() const {
  if (!(pixelate_low >= 1.0) || !(pixelate_high >= pixelate_low)) {
    throw Error(ErrorKind::Config, "transforms.pixelate_factor_range must satisfy 1 <= low <= high");
  }
  if (bold_n < 1) throw Error(ErrorKind::Config, "transforms.bold_n must be >= 1");
  if (pad_max < 0) throw Error(ErrorKind::Config, "transforms.pad_max must be >= 0");
  for (double p : {p_bold, p_pixelate, p_pad}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::Config, "transform probabilities must be in [0, 1]");
    }
  }
}

RasterImage pixelate(const RasterImage& img, double factor) {
  if (!(factor >= 1.0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::InvalidFactor, "pixelate factor must be >= 1");
  }
  const int dw = static_cast<int>(std::floor(img.width / factor));
  const int dh = static_cast<int>(std::floor(img.height / factor));
  if (dw < 1 || dh < 1) {
    throw Error(ErrorKind::InvalidFactor,
                "pixelate factor " + std::to_string(factor) + " reduces a " +
                    std::to_string(img.width) + "x" + std::to_string(img.height) +
                    " image below 1 px");
  }
  if (dw == img.width && dh == img.height) return img;
  std::vector<double> plane(img.pixels.begin(), img.pixels.end());
  const auto small = resample(plane, img.width, img.height, dw, dh);
  const auto back = resample(small, dw, dh, img.width, img.height);
  RasterImage out(img.width, img.height);
  for (std::size_t i = 0; i < back.size(); ++i) {
    out.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::lround(back[i]), 0L, 255L));
  }
  return out;
}

RasterImage binarize(const RasterImage& img, std::uint8_t threshold) {
  RasterImage out = img;
  for (auto& p : out.pixels) p = p < threshold ? 0 : 255;
  return out;
}

RasterImage bold(const RasterImage& img, int n) {
  if (n < 1) throw Error(ErrorKind::Contract, "bold radius must be >= 1");
  const int w = img.width, h = img.height;
  // summed-area table of black pixels, (w+1) x (h+1)
  std::vector<int> sat(static_cast<std::size_t>(w + 1) * static_cast<std::size_t>(h + 1), 0);
  auto s = [&](int x, int y) -> int& {
    return sat[static_cast<std::size_t>(y) * static_cast<std::size_t>(w + 1) +
               static_cast<std::size_t>(x)];
  };
  for (int y = 0; y < h; ++y) {
    int row = 0;
    for (int x = 0; x < w; ++x) {
      const std::uint8_t p = img.at(x, y);
      if (p != 0 && p != 255) {
        throw Error(ErrorKind::Contract, "bold requires a binary image (found value " +
                                             std::to_string(p) + ")");
      }
      row += p == 0 ? 1 : 0;
      s(x + 1, y + 1) = s(x + 1, y) + row;
    }
  }
  RasterImage out = img;
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - n), y1 = std::min(h, y + n + 1);
    for (int x = 0; x < w; ++x) {
      if (img.at(x, y) == 0) continue;
      const int x0 = std::max(0, x - n), x1 = std::min(w, x + n + 1);
      const int black = s(x1, y1) - s(x0, y1) - s(x1, y0) + s(x0, y0);
      if (black >= n) out.at(x, y) = 0;
    }
  }
  return out;
}

RasterImage pad_columns(const RasterImage& img, int left, int right) {
  if (left < 0 || right < 0) throw Error(ErrorKind::Contract, "padding must be >= 0");
  RasterImage out(img.width + left + right, img.height);
  for (int y = 0; y < img.height; ++y) {
    std::copy_n(img.pixels.begin() + static_cast<std::ptrdiff_t>(y) * img.width, img.width,
                out.pixels.begin() + static_cast<std::ptrdiff_t>(y) * out.width + left);
  }
  return out;
}

RasterImage pad(const RasterImage& img, RandomSource& rng, int pad_max) {
  if (pad_max < 0) throw Error(ErrorKind::Contract, "pad_max must be >= 0");
  const int left = static_cast<int>(rng.uniform_int(0, pad_max));
  const int right = static_cast<int>(rng.uniform_int(0, pad_max));
  return pad_columns(img, left, right);
}

PipelineResult apply_pipeline(const RasterImage& img, const TransformConfig& cfg,
                              RandomSource& rng) {
  cfg.validate();
  const bool do_bold = rng.bernoulli(cfg.p_bold);
  const bool do_pixelate = rng.bernoulli(cfg.p_pixelate);
  const bool do_pad = rng.bernoulli(cfg.p_pad);
  PipelineResult r{img, {}};
  if (do_bold) {
    r.image = bold(binarize(r.image, cfg.binarize_threshold), cfg.bold_n);
    r.applied.push_back("bold");
  }
  if (do_pixelate) {
    const double factor = rng.uniform_real(cfg.pixelate_low, cfg.pixelate_high);
    r.image = pixelate(r.image, factor);
    r.applied.push_back("pixelate");
  }
  if (do_pad) {
    r.image = pad(r.image, rng, cfg.pad_max);
    r.applied.push_back("pad");
  }
  return r;
}

}  // namespace ocrsynth
