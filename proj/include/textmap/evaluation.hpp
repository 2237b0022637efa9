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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textmap/annotation.hpp"
#include "textmap/category.hpp"
#include "textmap/detector.hpp"
#include "textmap/geometry.hpp"
#include "textmap/raster.hpp"

namespace textmap {

struct EvalParams {
    double iou_threshold = 0.5;
    /// Predictions below this confidence are discarded before matching.
    double confidence_threshold = 0.7;

    void validate() const;
};

/// Intersection over union of two half-open boxes; 0 when both are empty.
double iou(const PixelBox& a, const PixelBox& b) noexcept;

enum class MatchLabel : std::uint8_t { TruePositive, FalsePositive, FalseNegative };

struct LabeledBox {
    PixelBox box;
    Category category = Category::Ingredients;
    MatchLabel label = MatchLabel::TruePositive;
    std::optional<double> confidence; ///< set for predictions only

    friend bool operator==(const LabeledBox&, const LabeledBox&) = default;
};

struct MatchCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    MatchCounts& operator+=(const MatchCounts& o) noexcept
    {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

using CategoryCounts = std::array<MatchCounts, kCategoryCount>;

struct MatchResult {
    CategoryCounts counts{};
    /// Kept predictions (TP/FP) in match order, then unmatched ground truth
    /// (FN) in input order, category by category.
    std::vector<LabeledBox> labeled;
};

/// Greedy one-to-one matching, independently per category: predictions are
/// gated by confidence, visited by descending confidence (ties in reading
/// order) and matched to the unmatched ground-truth box of highest IoU when
/// that IoU reaches the threshold.
MatchResult match_detections(std::span<const DetectionBox> predictions,
                             std::span<const GroundTruthRegion> ground_truth, const EvalParams& params = {});

struct MetricRow {
    MatchCounts counts;
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0; ///< tp / (tp + fp + fn)
};

struct EvalReport {
    std::array<MetricRow, kCategoryCount> per_category{};
    MetricRow totals;
};

/// Zero denominators yield 0.
MetricRow compute_metrics(const MatchCounts& counts) noexcept;
EvalReport compute_report(const CategoryCounts& counts) noexcept;

/// JSON keyed by category name plus `totals`; metrics rounded to 4 decimals.
std::string write_report(const EvalReport& report);

/// Human-readable table with one row per category and a totals row.
std::string format_report_table(const EvalReport& report);

struct OverlayOptions {
    int thickness = 3;
    bool draw_confidence = true;
};

inline constexpr std::array<std::uint8_t, 3> kTruePositiveColor{0, 255, 0};
inline constexpr std::array<std::uint8_t, 3> kFalsePositiveColor{0, 0, 255};
inline constexpr std::array<std::uint8_t, 3> kFalseNegativeColor{255, 0, 255};

/// Draws box outlines colored by label and, for predictions, the confidence
/// printed just above the box (below it when there is no room). Anything
/// outside the image is clipped.
Image3 render_eval_overlay(const Image3& image, std::span<const LabeledBox> boxes,
                           const OverlayOptions& options = {});

} // namespace textmap
