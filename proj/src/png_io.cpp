// Copyright 2026 The Textmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "textmap/png_io.hpp"

#include <cstring>

#include <png.h>

#include "textmap/error.hpp"

namespace textmap {

namespace {

[[noreturn]] void on_png_error(png_structp png, png_const_charp message)
{
    auto* error = static_cast<std::string*>(png_get_error_ptr(png));
    if (error != nullptr)
        *error = message;
    png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct Reader {
    std::string_view bytes;
    std::size_t offset = 0;
};

void read_chunk(png_structp png, png_bytep out, png_size_t length)
{
    auto* r = static_cast<Reader*>(png_get_io_ptr(png));
    if (r->bytes.size() - r->offset < length)
        png_error(png, "unexpected end of PNG data");
    std::memcpy(out, r->bytes.data() + r->offset, length);
    r->offset += length;
}

void write_chunk(png_structp png, png_bytep data, png_size_t length)
{
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), length);
}

void flush_nothing(png_structp) {}

} // namespace

std::string encode_png_rgb(int width, int height, std::span<const std::uint8_t> interleaved)
{
    if (width <= 0 || height <= 0 ||
        interleaved.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3)
        throw DimensionError("PNG encode: pixel buffer does not match " + std::to_string(width) + "x" +
                             std::to_string(height) + "x3");

    std::string error;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, on_png_error, on_png_warning);
    if (png == nullptr)
        throw Error("PNG encode: out of memory");
    png_infop info = png_create_info_struct(png);
    std::string out;
    std::vector<png_const_bytep> rows(static_cast<std::size_t>(height));

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("PNG encode failed: " + error);
    }
    png_set_write_fn(png, &out, write_chunk, flush_nothing);
    png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_UP);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    for (int y = 0; y < height; ++y)
        rows[static_cast<std::size_t>(y)] = interleaved.data() + static_cast<std::size_t>(y) * width * 3;
    png_set_rows(png, info, const_cast<png_bytepp>(rows.data()));
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

RgbPixels decode_png_rgb(std::string_view bytes)
{
    if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0)
        throw FormatError("not a PNG file");

    std::string error;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, on_png_error, on_png_warning);
    if (png == nullptr)
        throw Error("PNG decode: out of memory");
    png_infop info = png_create_info_struct(png);
    Reader reader{bytes, 0};
    RgbPixels px;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("invalid PNG: " + error);
    }
    png_set_read_fn(png, &reader, read_chunk);
    png_read_info(png, info);

    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    if (depth == 16)
        png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color & PNG_COLOR_MASK_ALPHA)
        png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);

    px.width = static_cast<int>(png_get_image_width(png, info));
    px.height = static_cast<int>(png_get_image_height(png, info));
    const std::size_t stride = png_get_rowbytes(png, info);
    if (stride != static_cast<std::size_t>(px.width) * 3)
        png_error(png, "unexpected row layout after RGB conversion");
    px.data.resize(stride * static_cast<std::size_t>(px.height));
    rows.resize(static_cast<std::size_t>(px.height));
    for (int y = 0; y < px.height; ++y)
        rows[static_cast<std::size_t>(y)] = px.data.data() + stride * static_cast<std::size_t>(y);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return px;
}

} // namespace textmap
