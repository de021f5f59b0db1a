// oracles.hpp - literal reference implementations used to check the
// optimized library code. Deliberately naive; keep them that way.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ocrsynth/image.hpp"
#include "ocrsynth/random.hpp"

namespace oracle {

/// The bolding rule read literally, O(w*h*n^2).
inline ocrsynth::RasterImage bold(const ocrsynth::RasterImage& in, int n) {
  ocrsynth::RasterImage out = in;
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      if (in.at(x, y) != 255) continue;
      int hot = 0;
      for (int dy = -n; dy <= n; ++dy) {
        for (int dx = -n; dx <= n; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= in.width || yy >= in.height) continue;
          if (in.at(xx, yy) == 0) ++hot;
        }
      }
      if (hot >= n) out.at(x, y) = 0;
    }
  }
  return out;
}

/// Full (m+1) x (n+1) edit-distance table.
inline std::size_t levenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

inline ocrsynth::RasterImage random_binary(ocrsynth::Rng& rng, int w, int h, double black) {
  ocrsynth::RasterImage img(w, h);
  for (auto& p : img.pixels) p = rng.bernoulli(black) ? 0 : 255;
  return img;
}

/// Random string over a mix of ASCII, Latin-1, Greek, CJK and astral code points.
inline std::u32string random_unicode(ocrsynth::Rng& rng, std::size_t max_len) {
  static const char32_t pool[] = {U'a', U'b', U'c', U' ', U'\\', U'{', U'}', U'é', U'ß',
                                  U'α', U'β', U'∑', U'中', U'文', U'😀', U'𝔸'};
  std::u32string s(rng.below(max_len + 1), U' ');
  for (auto& c : s) c = pool[rng.below(std::size(pool))];
  return s;
}

inline std::size_t black_count(const ocrsynth::RasterImage& img) {
  return static_cast<std::size_t>(std::count(img.pixels.begin(), img.pixels.end(), 0));
}

}  // namespace oracle
