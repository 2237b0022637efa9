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
#include <cstdint>
#include <ostream>

namespace textmap {

/// Half-open integer rectangle [x0, x1) x [y0, y1) in pixel coordinates.
struct PixelBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    constexpr int width() const noexcept { return x1 - x0; }
    constexpr int height() const noexcept { return y1 - y0; }
    constexpr std::int64_t area() const noexcept
    {
        return valid() ? std::int64_t{width()} * height() : 0;
    }
    constexpr bool valid() const noexcept { return x0 < x1 && y0 < y1 && x0 >= 0 && y0 >= 0; }

    constexpr bool contains_point(double x, double y) const noexcept
    {
        return x >= x0 && x < x1 && y >= y0 && y < y1;
    }

    friend constexpr bool operator==(const PixelBox&, const PixelBox&) = default;
};

constexpr std::int64_t intersection_area(const PixelBox& a, const PixelBox& b) noexcept
{
    const int w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    const int h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    if (w <= 0 || h <= 0)
        return 0;
    return std::int64_t{w} * h;
}

/// Smallest box covering both.
constexpr PixelBox bounding_union(const PixelBox& a, const PixelBox& b) noexcept
{
    return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1), std::max(a.y1, b.y1)};
}

/// Orders boxes by (y0, x0, y1, x1); used as the deterministic tie-break.
constexpr bool reading_order_less(const PixelBox& a, const PixelBox& b) noexcept
{
    if (a.y0 != b.y0) return a.y0 < b.y0;
    if (a.x0 != b.x0) return a.x0 < b.x0;
    if (a.y1 != b.y1) return a.y1 < b.y1;
    return a.x1 < b.x1;
}

inline std::ostream& operator<<(std::ostream& os, const PixelBox& b)
{
    return os << '[' << b.x0 << ',' << b.y0 << ',' << b.x1 << ',' << b.y1 << ']';
}

} // namespace textmap
