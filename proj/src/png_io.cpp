// Copyright 2026 The cxrharmon Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cxrharmon/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "cxrharmon/errors.hpp"

namespace cxrharmon {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_handler(png_structp png, png_const_charp msg) {
  // libpng expects the handler not to return; unwind through C++ instead of
  // longjmp so RAII cleanup runs.
  (void)png;
  throw DecodeError(std::string("libpng: ") + msg);
}

void png_warning_handler(png_structp, png_const_charp) {}

struct ReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadState() {
    if (png != nullptr) png_destroy_read_struct(&png, info != nullptr ? &info : nullptr, nullptr);
  }
};

struct WriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~WriteState() {
    if (png != nullptr) png_destroy_write_struct(&png, info != nullptr ? &info : nullptr);
  }
};

}  // namespace

RawImage decode_png_gray(const std::filesystem::path& path, int expected_bit_depth) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw DecodeError("cannot open image file: " + path.string());

  unsigned char signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
    throw DecodeError("not a PNG file: " + path.string());
  }

  ReadState state;
  state.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                     png_warning_handler);
  if (state.png == nullptr) throw DecodeError("png_create_read_struct failed");
  state.info = png_create_info_struct(state.png);
  if (state.info == nullptr) throw DecodeError("png_create_info_struct failed");

  png_init_io(state.png, file.get());
  png_set_sig_bytes(state.png, 8);
  png_read_info(state.png, state.info);

  const png_uint_32 width = png_get_image_width(state.png, state.info);
  const png_uint_32 height = png_get_image_height(state.png, state.info);
  const int color_type = png_get_color_type(state.png, state.info);
  int bit_depth = png_get_bit_depth(state.png, state.info);

  if (color_type != PNG_COLOR_TYPE_GRAY) {
    throw DecodeError("color PNG unsupported (grayscale only): " + path.string());
  }
  if (bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(state.png);
    bit_depth = 8;
  }
  if (expected_bit_depth != 0 && bit_depth != expected_bit_depth) {
    throw BitDepthMismatch(path.string() + ": stored depth " + std::to_string(bit_depth) +
                           ", profile declares " + std::to_string(expected_bit_depth));
  }
  // 16-bit samples are big-endian in the file; no swap so that bytes land as
  // hi, lo in row buffers and we assemble values explicitly below.
  const int passes = png_set_interlace_handling(state.png);
  png_read_update_info(state.png, state.info);

  RawImage out;
  out.width = width;
  out.height = height;
  out.bit_depth = bit_depth;
  out.pixels.assign(static_cast<size_t>(width) * height, 0);

  const size_t row_bytes = png_get_rowbytes(state.png, state.info);
  std::vector<unsigned char> row(row_bytes);
  for (int pass = 0; pass < passes; ++pass) {
    for (png_uint_32 y = 0; y < height; ++y) {
      // Interlaced passes update partial rows; seed the buffer with what we
      // have so far so untouched pixels survive.
      if (passes > 1) {
        for (png_uint_32 x = 0; x < width; ++x) {
          const uint16_t v = out.pixels[static_cast<size_t>(y) * width + x];
          if (bit_depth == 16) {
            row[2 * x] = static_cast<unsigned char>(v >> 8);
            row[2 * x + 1] = static_cast<unsigned char>(v & 0xFF);
          } else {
            row[x] = static_cast<unsigned char>(v);
          }
        }
      }
      png_read_row(state.png, row.data(), nullptr);
      for (png_uint_32 x = 0; x < width; ++x) {
        uint16_t v;
        if (bit_depth == 16) {
          v = static_cast<uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
        } else {
          v = row[x];
        }
        out.pixels[static_cast<size_t>(y) * width + x] = v;
      }
    }
  }
  png_read_end(state.png, nullptr);
  return out;
}

void encode_png_gray(const std::filesystem::path& path, const RawImage& img) {
  if (img.bit_depth != 8 && img.bit_depth != 16) {
    throw DomainError("PNG encoder supports bit depths 8 and 16");
  }
  if (img.pixels.size() != img.width * img.height) {
    throw DomainError("RawImage pixel buffer does not match its dimensions");
  }
  const uint16_t max_value = img.bit_depth == 8 ? 255 : 65535;
  for (uint16_t p : img.pixels) {
    if (p > max_value) throw DomainError("pixel value exceeds bit depth");
  }

  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw IoError("cannot open file for writing: " + path.string());

  WriteState state;
  state.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                      png_warning_handler);
  if (state.png == nullptr) throw IoError("png_create_write_struct failed");
  state.info = png_create_info_struct(state.png);
  if (state.info == nullptr) throw IoError("png_create_info_struct failed");

  png_init_io(state.png, file.get());
  png_set_IHDR(state.png, state.info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), img.bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(state.png, state.info);

  std::vector<unsigned char> row(img.bit_depth == 16 ? img.width * 2 : img.width);
  for (size_t y = 0; y < img.height; ++y) {
    for (size_t x = 0; x < img.width; ++x) {
      const uint16_t v = img.pixels[y * img.width + x];
      if (img.bit_depth == 16) {
        row[2 * x] = static_cast<unsigned char>(v >> 8);
        row[2 * x + 1] = static_cast<unsigned char>(v & 0xFF);
      } else {
        row[x] = static_cast<unsigned char>(v);
      }
    }
    png_write_row(state.png, row.data());
  }
  png_write_end(state.png, nullptr);
}

}  // namespace cxrharmon
