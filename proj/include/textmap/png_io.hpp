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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textmap/raster.hpp"

namespace textmap {

/// Decoded 8-bit RGB pixels, row-major and pixel-interleaved.
struct RgbPixels {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;
};

/// Lossless 8-bit RGB PNG. The encoding carries no timestamps, so equal
/// pixels give equal bytes.
std::string encode_png_rgb(int width, int height, std::span<const std::uint8_t> interleaved);

/// Decodes any PNG to 8-bit RGB (palette, gray and 16-bit inputs are
/// converted, alpha is dropped). Throws FormatError on invalid data.
RgbPixels decode_png_rgb(std::string_view bytes);

template <typename Tag>
std::string encode_png(const Raster<std::uint8_t, 3, Tag>& r)
{
    const auto pixels = r.interleaved();
    return encode_png_rgb(r.width(), r.height(), pixels);
}

template <typename RasterT>
RasterT decode_png(std::string_view bytes)
{
    const RgbPixels px = decode_png_rgb(bytes);
    return RasterT::from_interleaved(px.width, px.height, px.data);
}

inline std::string write_textmap_png(const TextMap& map) { return encode_png(map); }

} // namespace textmap
