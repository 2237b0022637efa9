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
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "textmap/annotation.hpp"
#include "textmap/detector.hpp"
#include "textmap/ocr.hpp"
#include "textmap/raster.hpp"

// Deliberately slow reference implementations. None of them calls the
// library routine it checks.
namespace oracle {

using textmap::Category;

struct Counts {
    std::uint64_t total = 0;
    std::array<std::uint64_t, textmap::kCategoryCount> in_region{};
};

/// Counts covered pixels one by one instead of intersecting rectangles.
inline bool pixel_majority_inside(const textmap::PixelBox& word, const textmap::PixelBox& region)
{
    std::int64_t inside = 0;
    std::int64_t all = 0;
    for (int y = word.y0; y < word.y1; ++y) {
        for (int x = word.x0; x < word.x1; ++x) {
            ++all;
            if (x >= region.x0 && x < region.x1 && y >= region.y0 && y < region.y1)
                ++inside;
        }
    }
    return all > 0 && 2 * inside >= all;
}

inline std::map<std::string, Counts> recount(const std::vector<textmap::AnnotatedDocument>& corpus)
{
    std::map<std::string, Counts> out;
    for (const auto& doc : corpus) {
        for (const auto& w : doc.doc.words) {
            const std::string key = textmap::tokenize(w.raw_text).normalized;
            if (key.empty())
                continue;
            Counts& c = out[key];
            ++c.total;
            for (std::size_t k = 0; k < textmap::kCategoryCount; ++k) {
                bool hit = false;
                for (const auto& r : doc.regions)
                    hit = hit || (static_cast<std::size_t>(r.category) == k && pixel_majority_inside(w.box, r.box));
                if (hit)
                    ++c.in_region[k];
            }
        }
    }
    return out;
}

inline int round_half_up_255(double s)
{
    if (s <= 0.0)
        return 0;
    if (s >= 1.0)
        return 255;
    return static_cast<int>(s * 255.0 + 0.5);
}

/// Visits every pixel and every box.
inline textmap::TextMap naive_rasterize(int width, int height, const std::vector<textmap::ScoredBox>& boxes)
{
    textmap::TextMap map(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            int r = 0, g = 0, b = 0;
            for (const auto& sb : boxes) {
                if (x < sb.box.x0 || x >= sb.box.x1 || y < sb.box.y0 || y >= sb.box.y1)
                    continue;
                r = std::max(r, round_half_up_255(sb.score.red));
                g = std::max(g, round_half_up_255(sb.score.green));
                b = std::max(b, round_half_up_255(sb.score.blue));
            }
            map(x, y, 0) = static_cast<std::uint8_t>(r);
            map(x, y, 1) = static_cast<std::uint8_t>(g);
            map(x, y, 2) = static_cast<std::uint8_t>(b);
        }
    }
    return map;
}

using Grid = std::vector<std::vector<int>>;

inline Grid window_dilate(const Grid& a, int r)
{
    const int h = static_cast<int>(a.size());
    const int w = h ? static_cast<int>(a[0].size()) : 0;
    Grid out(h, std::vector<int>(w, 0));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int dy = -r; dy <= r && !out[y][x]; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int yy = y + dy, xx = x + dx;
                    if (yy >= 0 && yy < h && xx >= 0 && xx < w && a[yy][xx]) {
                        out[y][x] = 1;
                        break;
                    }
                }
    return out;
}

/// Out-of-image pixels count as foreground.
inline Grid window_erode(const Grid& a, int r)
{
    const int h = static_cast<int>(a.size());
    const int w = h ? static_cast<int>(a[0].size()) : 0;
    Grid out(h, std::vector<int>(w, 1));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int dy = -r; dy <= r && out[y][x]; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int yy = y + dy, xx = x + dx;
                    if (yy >= 0 && yy < h && xx >= 0 && xx < w && !a[yy][xx]) {
                        out[y][x] = 0;
                        break;
                    }
                }
    return out;
}

/// Breadth-first flood fill over the closed mask.
inline std::vector<textmap::DetectionBox> flood_fill_detect(const textmap::TextMap& map, Category category,
                                                            const textmap::DetectorParams& p)
{
    const int w = map.width();
    const int h = map.height();
    Grid rel(h, std::vector<int>(w, 0));
    Grid fg(h, std::vector<int>(w, 0));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            rel[y][x] = std::max({int(map(x, y, 0)), int(map(x, y, 1)), int(map(x, y, 2))});
            fg[y][x] = rel[y][x] > p.binarize_threshold ? 1 : 0;
        }
    const Grid closed = window_erode(window_dilate(fg, p.close_radius), p.close_radius);

    struct Found {
        textmap::PixelBox box;
        long long sum;
        long long count;
    };
    Grid seen(h, std::vector<int>(w, 0));
    std::vector<Found> found;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (!closed[sy][sx] || seen[sy][sx])
                continue;
            textmap::PixelBox box{sx, sy, sx + 1, sy + 1};
            long long sum = 0;
            long long count = 0;
            std::deque<std::pair<int, int>> queue{{sx, sy}};
            seen[sy][sx] = 1;
            while (!queue.empty()) {
                auto [x, y] = queue.front();
                queue.pop_front();
                box.x0 = std::min(box.x0, x);
                box.y0 = std::min(box.y0, y);
                box.x1 = std::max(box.x1, x + 1);
                box.y1 = std::max(box.y1, y + 1);
                if (fg[y][x]) {
                    sum += rel[y][x];
                    ++count;
                }
                const int nx[4] = {x - 1, x + 1, x, x};
                const int ny[4] = {y, y, y - 1, y + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] >= 0 && nx[k] < w && ny[k] >= 0 && ny[k] < h && closed[ny[k]][nx[k]] &&
                        !seen[ny[k]][nx[k]]) {
                        seen[ny[k]][nx[k]] = 1;
                        queue.emplace_back(nx[k], ny[k]);
                    }
                }
            }
            if (static_cast<std::int64_t>(box.width()) * box.height() < p.min_area)
                continue;
            found.push_back({box, sum, count});
        }
    }
    // Exact rational comparison of the mean relevances.
    std::stable_sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
        const long long lhs = a.sum * std::max(b.count, 1LL);
        const long long rhs = b.sum * std::max(a.count, 1LL);
        if (lhs != rhs)
            return lhs > rhs;
        return std::tie(a.box.y0, a.box.x0, a.box.y1, a.box.x1) < std::tie(b.box.y0, b.box.x0, b.box.y1, b.box.x1);
    });
    std::vector<textmap::DetectionBox> out;
    for (const auto& f : found)
        out.push_back({f.box, f.count == 0 ? 0.0 : static_cast<double>(f.sum) / f.count / 255.0, category});
    return out;
}

} // namespace oracle
