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

#include "textmap/raster.hpp"

#include <array>

#include "textmap/error.hpp"

namespace textmap {

TextMap rasterize(int width, int height, std::span<const ScoredBox> boxes)
{
    TextMap map(width, height);
    for (const auto& sb : boxes) {
        const PixelBox b{std::max(sb.box.x0, 0), std::max(sb.box.y0, 0), std::min(sb.box.x1, width),
                         std::min(sb.box.y1, height)};
        if (b.x0 >= b.x1 || b.y0 >= b.y1)
            continue;
        const std::array<std::uint8_t, 3> values{quantize(sb.score.red), quantize(sb.score.green),
                                                 quantize(sb.score.blue)};
        for (int c = 0; c < 3; ++c) {
            auto block = map.channel(c).block(b.y0, b.x0, b.height(), b.width());
            block = block.max(values[static_cast<std::size_t>(c)]);
        }
    }
    return map;
}

TextMap render_textmap(const OcrDocument& doc, const LexiconStats& stats, Category category,
                       const ScoringOptions& options)
{
    std::vector<ScoredBox> scored;
    scored.reserve(doc.words.size());
    for (const auto& w : doc.words)
        scored.push_back({w.box, score_word(stats, w, category, options)});
    return rasterize(doc.width, doc.height, scored);
}

Tensor6 compose_6ch(const Image3& image, const TextMap& map)
{
    if (image.width() != map.width() || image.height() != map.height()) {
        throw DimensionError("dimension mismatch: image is " + std::to_string(image.width()) + "x" +
                             std::to_string(image.height()) + " but text-map is " +
                             std::to_string(map.width()) + "x" + std::to_string(map.height()));
    }
    Tensor6 t(image.width(), image.height());
    for (int c = 0; c < 3; ++c) {
        t.channel(c) = image.channel(c);
        t.channel(c + 3) = map.channel(c);
    }
    return t;
}

namespace {

void put_u32(std::string& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t at)
{
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
    return v;
}

template <typename RasterT>
std::string write_raster(std::string_view magic, const RasterT& r)
{
    const std::vector<std::uint8_t> payload = r.interleaved();
    std::string out;
    out.reserve(kRasterHeaderBytes + payload.size());
    out.append(magic);
    put_u32(out, static_cast<std::uint32_t>(r.width()));
    put_u32(out, static_cast<std::uint32_t>(r.height()));
    out.push_back(static_cast<char>(RasterT::kChannels));
    out.append(reinterpret_cast<const char*>(payload.data()), payload.size());
    return out;
}

template <typename RasterT>
RasterT read_raster(std::string_view magic, std::string_view bytes)
{
    const std::string kind(magic);
    if (bytes.size() < kRasterHeaderBytes)
        throw FormatError(kind + " file truncated: " + std::to_string(bytes.size()) +
                          " bytes is shorter than the 13-byte header");
    if (bytes.substr(0, 4) != magic)
        throw FormatError("bad magic: expected '" + kind + "'");
    const std::uint32_t width = get_u32(bytes, 4);
    const std::uint32_t height = get_u32(bytes, 8);
    const auto channels = static_cast<unsigned char>(bytes[12]);
    if (channels != RasterT::kChannels)
        throw FormatError("unsupported channel count " + std::to_string(channels) + " in " + kind +
                          " file (expected " + std::to_string(RasterT::kChannels) + ")");
    if (width == 0 || height == 0 || width > 1u << 20 || height > 1u << 20)
        throw FormatError(kind + " file declares invalid size " + std::to_string(width) + "x" +
                          std::to_string(height));
    const std::uint64_t payload = std::uint64_t{width} * height * channels;
    if (bytes.size() - kRasterHeaderBytes < payload)
        throw FormatError(kind + " file truncated: header declares " + std::to_string(payload) +
                          " payload bytes, found " + std::to_string(bytes.size() - kRasterHeaderBytes));
    if (bytes.size() - kRasterHeaderBytes > payload)
        throw FormatError(kind + " file has " +
                          std::to_string(bytes.size() - kRasterHeaderBytes - payload) +
                          " trailing bytes after the payload");
    const auto* data = reinterpret_cast<const std::uint8_t*>(bytes.data() + kRasterHeaderBytes);
    return RasterT::from_interleaved(static_cast<int>(width), static_cast<int>(height),
                                     std::span<const std::uint8_t>(data, payload));
}

} // namespace

std::string write_tensor6(const Tensor6& t) { return write_raster("T6CH", t); }
Tensor6 read_tensor6(std::string_view bytes) { return read_raster<Tensor6>("T6CH", bytes); }

std::string write_textmap(const TextMap& map) { return write_raster("TMAP", map); }
TextMap read_textmap(std::string_view bytes) { return read_raster<TextMap>("TMAP", bytes); }

} // namespace textmap
