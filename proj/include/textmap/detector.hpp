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

#include "textmap/category.hpp"
#include "textmap/geometry.hpp"
#include "textmap/raster.hpp"

namespace textmap {

/// Parameters of the closed-form baseline detector.
struct DetectorParams {
    int binarize_threshold = 128;   ///< foreground iff relevance > threshold
    int close_radius = 8;           ///< square structuring element of side 2r+1
    std::int64_t min_area = 400;    ///< minimum bounding-box area in px^2

    /// Throws InputError when a field is out of range.
    void validate() const;
};

struct DetectionBox {
    PixelBox box;
    double confidence = 0.0;
    Category category = Category::Ingredients;

    friend bool operator==(const DetectionBox&, const DetectionBox&) = default;
};

/// 0/1 mask, same indexing as a Plane.
using Mask = Plane<std::uint8_t>;

/// Per-pixel maximum over the three map channels.
Plane8 relevance(const TextMap& map);

Mask binarize(const Plane8& relevance, int threshold);

/// Square-element dilation; pixels outside the mask count as background.
Mask dilate(const Mask& mask, int radius);

/// Square-element erosion; pixels outside the mask count as foreground, so
/// closing never shrinks a shape that touches the border.
Mask erode(const Mask& mask, int radius);

inline Mask close(const Mask& mask, int radius) { return erode(dilate(mask, radius), radius); }

/// Threshold -> closing -> 4-connected components -> boxes. Confidence is the
/// mean relevance / 255 over the component's pre-closing foreground pixels.
/// Sorted by descending confidence, ties in reading order.
std::vector<DetectionBox> detect_regions(const TextMap& map, Category category,
                                         const DetectorParams& params = {});

/// One row of a detections file.
struct DocumentDetection {
    std::string doc_id;
    DetectionBox detection;

    friend bool operator==(const DocumentDetection&, const DocumentDetection&) = default;
};

/// JSON array of `{doc_id, category, bbox, confidence}`.
std::string write_detections(std::span<const DocumentDetection> detections);
std::vector<DocumentDetection> parse_detections(std::string_view bytes);

} // namespace textmap
