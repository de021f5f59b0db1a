// png_io.cpp

#include "ocrsynth/png_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "ocrsynth/error.hpp"

namespace ocrsynth {
namespace {

struct ReadCursor {
  const std::vector<std::uint8_t>* bytes;
  std::size_t offset;
};

void on_png_error(png_structp, png_const_charp message) {
  throw Error(ErrorKind::Input, std::string("png: ") + message);
}

void on_png_warning(png_structp, png_const_charp) {}

void write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

void read_from_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + length > cur->bytes->size()) {
    png_error(png, "unexpected end of data");
  }
  std::memcpy(data, cur->bytes->data() + cur->offset, length);
  cur->offset += length;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), {});
}

}  // namespace

std::size_t count_below(const RasterImage& img, std::uint8_t threshold) {
  std::size_t n = 0;
  for (std::uint8_t p : img.pixels) n += p < threshold ? 1 : 0;
  return n;
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  if (img.width <= 0 || img.height <= 0) {
    throw Error(ErrorKind::Contract, "cannot encode an empty image");
  }
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            on_png_error, on_png_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::Io, "png: allocation failed");
  }
  try {
    png_set_write_fn(png, &out, write_to_vector, flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 3);
    png_set_filter(png, 0, PNG_FILTER_UP);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
      png_write_row(png, img.pixels.data() + static_cast<std::size_t>(y) *
                                                 static_cast<std::size_t>(img.width));
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const std::filesystem::path& path, const RasterImage& img) {
  const auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

RasterImage decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorKind::Input, "not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           on_png_error, on_png_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::Io, "png: allocation failed");
  }
  RasterImage img;
  try {
    ReadCursor cursor{&bytes, 0};
    png_set_read_fn(png, &cursor, read_from_vector);
    png_read_info(png, info);
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
        color == PNG_COLOR_TYPE_PALETTE) {
      png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    }
    png_set_strip_alpha(png);
    png_read_update_info(png, info);
    img = RasterImage(static_cast<int>(png_get_image_width(png, info)),
                      static_cast<int>(png_get_image_height(png, info)));
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(img.width)) {
      png_error(png, "unsupported PNG layout after conversion");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
      rows[static_cast<std::size_t>(y)] =
          img.pixels.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width);
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

RasterImage read_png(const std::filesystem::path& path) {
  try {
    return decode_png(read_bytes(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::pair<int, int> png_dimensions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::uint8_t header[24];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (in.gcount() != sizeof header || png_sig_cmp(header, 0, 8) != 0 ||
      std::memcmp(header + 12, "IHDR", 4) != 0) {
    throw Error(ErrorKind::Input, path.string() + " is not a PNG file");
  }
  auto be32 = [&](int o) {
    return static_cast<int>((header[o] << 24) | (header[o + 1] << 16) |
                            (header[o + 2] << 8) | header[o + 3]);
  };
  return {be32(16), be32(20)};
}

}  // namespace ocrsynth
