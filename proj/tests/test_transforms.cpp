// test_transforms.cpp

#include <doctest.h>

#include <algorithm>

#include "ocrsynth/error.hpp"
#include "ocrsynth/transforms.hpp"
#include "oracles.hpp"

using namespace ocrsynth;

TEST_CASE("pixelate") {
  Rng rng(1);
  RasterImage img(37, 23);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.below(256));
  CHECK(pixelate(img, 1.0) == img);
  for (double f : {1.3, 2.0, 2.7, 3.0, 10.0}) {
    const RasterImage out = pixelate(img, f);
    CHECK(out.width == img.width);
    CHECK(out.height == img.height);
  }

  // 2x2 checkerboard: the single downsampled pixel samples the centre, i.e.
  // (0 + 255 + 255 + 0) / 4 = 127.5; upsampling a 1x1 image is constant.
  RasterImage checker(2, 2);
  checker.pixels = {0, 255, 255, 0};
  const RasterImage grey = pixelate(checker, 2.0);
  CHECK(grey.pixels == std::vector<std::uint8_t>(4, 128));

  CHECK_THROWS_AS(pixelate(checker, 0.5), Error);
  try {
    pixelate(checker, 3.0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidFactor);
  }
}

TEST_CASE("binarize") {
  RasterImage white(5, 4);
  CHECK(binarize(white, 128) == white);
  RasterImage img(4, 1);
  img.pixels = {0, 127, 128, 255};
  CHECK(binarize(img, 128).pixels == std::vector<std::uint8_t>{0, 0, 255, 255});
  Rng rng(2);
  RasterImage noise(30, 30);
  for (auto& p : noise.pixels) p = static_cast<std::uint8_t>(rng.below(256));
  for (auto p : binarize(noise).pixels) CHECK((p == 0 || p == 255));
}

TEST_CASE("bold: examples") {
  RasterImage white(9, 9);
  for (int n : {1, 2, 3}) CHECK(bold(white, n) == white);

  RasterImage dot(5, 5);
  dot.at(2, 2) = 0;
  const RasterImage out = bold(dot, 1);
  CHECK(out == oracle::bold(dot, 1));
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      const bool inside = std::abs(x - 2) <= 1 && std::abs(y - 2) <= 1;
      CHECK(out.at(x, y) == (inside ? 0 : 255));
    }
  // n=2 needs two hot pixels, a lone dot stays lone
  CHECK(bold(dot, 2) == dot);

  RasterImage grey(3, 3, 100);
  CHECK_THROWS_AS(bold(grey, 1), Error);
  CHECK_THROWS_AS(bold(dot, 0), Error);
}

TEST_CASE("bold: oracle equivalence and monotonicity") {
  Rng rng(64);
  for (int i = 0; i < 100; ++i) {
    const RasterImage img = oracle::random_binary(rng, 64, 64, 0.02 + 0.2 * rng.uniform01());
    for (int n : {1, 2, 3}) {
      const RasterImage fast = bold(img, n);
      CHECK(fast == oracle::bold(img, n));
      for (std::size_t k = 0; k < img.pixels.size(); ++k) {
        if (img.pixels[k] == 0) REQUIRE(fast.pixels[k] == 0);
      }
      CHECK(oracle::black_count(bold(fast, n)) >= oracle::black_count(fast));
    }
  }
}

TEST_CASE("pad") {
  RasterImage img(10, 4);
  img.at(0, 0) = 0;
  img.at(9, 3) = 17;
  Rng rng(3);
  CHECK(pad(img, rng, 0) == img);
  ScriptedDraws d;
  d.integers({3, 5});
  const RasterImage out = pad(img, d, 40);
  CHECK(out.width == 18);
  CHECK(out.height == 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 3; ++x) CHECK(out.at(x, y) == 255);
  CHECK(out.at(3, 0) == 0);
  CHECK(out.at(12, 3) == 17);
  CHECK(count_below(out, 255) == count_below(img, 255));
}

TEST_CASE("apply_pipeline") {
  Rng rng(4);
  RasterImage img(120, 40);
  for (int x = 10; x < 60; ++x) img.at(x, 20) = 30;
  TransformConfig off;
  off.p_bold = off.p_pixelate = off.p_pad = 0;
  const PipelineResult same = apply_pipeline(img, off, rng);
  CHECK(same.image == img);
  CHECK(same.applied.empty());

  TransformConfig on;
  on.p_bold = on.p_pixelate = on.p_pad = 1;
  Rng a(9), b(9);
  const PipelineResult ra = apply_pipeline(img, on, a);
  const PipelineResult rb = apply_pipeline(img, on, b);
  CHECK(ra.image == rb.image);
  CHECK(ra.applied == std::vector<std::string>{"bold", "pixelate", "pad"});

  Rng c(10);
  for (int i = 0; i < 50; ++i) {
    const PipelineResult r = apply_pipeline(img, TransformConfig{}, c);
    CHECK(r.image.width >= img.width);
    CHECK(r.image.height == img.height);
  }
  TransformConfig bad;
  bad.pixelate_low = 0.5;
  CHECK_THROWS_AS(apply_pipeline(img, bad, c), Error);
}
