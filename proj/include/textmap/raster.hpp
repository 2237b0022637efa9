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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "textmap/category.hpp"
#include "textmap/geometry.hpp"
#include "textmap/lexicon.hpp"
#include "textmap/ocr.hpp"
#include "textmap/scoring.hpp"

namespace textmap {

/// One image channel, indexed (row, col) = (y, x).
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Plane8 = Plane<std::uint8_t>;

/// Planar multi-channel raster. `Tag` keeps images, text-maps and tensors
/// from being mixed up even when their layouts agree.
template <typename Scalar, int Channels, typename Tag>
class Raster {
public:
    static constexpr int kChannels = Channels;
    using scalar_type = Scalar;

    Raster() = default;

    Raster(int width, int height) : width_(width), height_(height)
    {
        for (auto& p : planes_)
            p = Plane<Scalar>::Zero(height, width);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    Plane<Scalar>& channel(int c) { return planes_[static_cast<std::size_t>(c)]; }
    const Plane<Scalar>& channel(int c) const { return planes_[static_cast<std::size_t>(c)]; }

    Scalar& operator()(int x, int y, int c) { return channel(c)(y, x); }
    Scalar operator()(int x, int y, int c) const { return channel(c)(y, x); }

    /// Row-major, pixel-interleaved copy (HWC).
    std::vector<Scalar> interleaved() const
    {
        std::vector<Scalar> out(static_cast<std::size_t>(width_) * height_ * Channels);
        std::size_t i = 0;
        for (int y = 0; y < height_; ++y)
            for (int x = 0; x < width_; ++x)
                for (int c = 0; c < Channels; ++c)
                    out[i++] = planes_[c](y, x);
        return out;
    }

    static Raster from_interleaved(int width, int height, std::span<const Scalar> data)
    {
        Raster r(width, height);
        std::size_t i = 0;
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                for (int c = 0; c < Channels; ++c)
                    r.planes_[c](y, x) = data[i++];
        return r;
    }

    friend bool operator==(const Raster& a, const Raster& b)
    {
        if (a.width_ != b.width_ || a.height_ != b.height_)
            return false;
        for (int c = 0; c < Channels; ++c) {
            if ((a.planes_[c] != b.planes_[c]).any())
                return false;
        }
        return true;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::array<Plane<Scalar>, Channels> planes_;
};

struct ImageTag {};
struct TextMapTag {};
struct TensorTag {};

/// Source RGB image.
using Image3 = Raster<std::uint8_t, 3, ImageTag>;
/// Red/green/blue relevance channels for one (document, category).
using TextMap = Raster<std::uint8_t, 3, TextMapTag>;
/// [image R, image G, image B, map R, map G, map B].
using Tensor6 = Raster<std::uint8_t, 6, TensorTag>;

/// round-half-up(score * 255), with the score clamped to [0, 1].
inline std::uint8_t quantize(double score) noexcept
{
    const double s = std::clamp(score, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(s * 255.0 + 0.5));
}

struct ScoredBox {
    PixelBox box;
    ScoreTriple score;
};

/// Fills each box with its quantized triple, combining overlaps by
/// per-channel maximum. Boxes are clipped to the map.
TextMap rasterize(int width, int height, std::span<const ScoredBox> boxes);

/// Scores every OCR word for `category` and rasterizes the result.
TextMap render_textmap(const OcrDocument& doc, const LexiconStats& stats, Category category,
                       const ScoringOptions& options = {});

/// Stacks image and map channels. Throws DimensionError when sizes differ.
Tensor6 compose_6ch(const Image3& image, const TextMap& map);

/// `T6CH` | u32 width | u32 height | u8 channels (=6) | width*height*6 bytes, little-endian,
/// row-major, pixel-interleaved.
std::string write_tensor6(const Tensor6& t);
Tensor6 read_tensor6(std::string_view bytes);

/// Same layout as the tensor file with magic `TMAP` and 3 channels.
std::string write_textmap(const TextMap& map);
TextMap read_textmap(std::string_view bytes);

inline constexpr std::size_t kRasterHeaderBytes = 13;

} // namespace textmap
