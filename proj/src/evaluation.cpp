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

#include "textmap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "textmap/error.hpp"

namespace textmap {

void EvalParams::validate() const
{
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0))
        throw InputError("iou_threshold must lie in (0, 1], got " + std::to_string(iou_threshold));
    if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0))
        throw InputError("confidence_threshold must lie in [0, 1], got " + std::to_string(confidence_threshold));
}

double iou(const PixelBox& a, const PixelBox& b) noexcept
{
    const std::int64_t inter = intersection_area(a, b);
    const std::int64_t uni = a.area() + b.area() - inter;
    if (uni <= 0)
        return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

MatchResult match_detections(std::span<const DetectionBox> predictions,
                             std::span<const GroundTruthRegion> ground_truth, const EvalParams& params)
{
    params.validate();
    MatchResult result;
    for (auto category : kAllCategories) {
        std::vector<DetectionBox> kept;
        for (const auto& p : predictions) {
            if (p.category == category && p.confidence >= params.confidence_threshold)
                kept.push_back(p);
        }
        std::stable_sort(kept.begin(), kept.end(), [](const DetectionBox& a, const DetectionBox& b) {
            if (a.confidence != b.confidence)
                return a.confidence > b.confidence;
            return reading_order_less(a.box, b.box);
        });

        std::vector<const GroundTruthRegion*> gts;
        for (const auto& g : ground_truth) {
            if (g.category == category)
                gts.push_back(&g);
        }
        std::vector<bool> matched(gts.size(), false);
        MatchCounts& counts = result.counts[index_of(category)];

        for (const auto& p : kept) {
            std::size_t best = gts.size();
            double best_iou = -1.0;
            for (std::size_t g = 0; g < gts.size(); ++g) {
                if (matched[g])
                    continue;
                const double v = iou(p.box, gts[g]->box);
                if (v > best_iou) {
                    best_iou = v;
                    best = g;
                }
            }
            const bool hit = best < gts.size() && best_iou >= params.iou_threshold;
            if (hit) {
                matched[best] = true;
                ++counts.tp;
            } else {
                ++counts.fp;
            }
            result.labeled.push_back(
                {p.box, category, hit ? MatchLabel::TruePositive : MatchLabel::FalsePositive, p.confidence});
        }
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (!matched[g]) {
                ++counts.fn;
                result.labeled.push_back({gts[g]->box, category, MatchLabel::FalseNegative, std::nullopt});
            }
        }
    }
    return result;
}

MetricRow compute_metrics(const MatchCounts& c) noexcept
{
    auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    return {c, ratio(c.tp, c.tp + c.fp), ratio(c.tp, c.tp + c.fn), ratio(c.tp, c.tp + c.fp + c.fn)};
}

EvalReport compute_report(const CategoryCounts& counts) noexcept
{
    EvalReport report;
    MatchCounts total;
    for (auto c : kAllCategories) {
        report.per_category[index_of(c)] = compute_metrics(counts[index_of(c)]);
        total += counts[index_of(c)];
    }
    report.totals = compute_metrics(total);
    return report;
}

namespace {

double round4(double v) { return std::round(v * 10000.0) / 10000.0; }

nlohmann::json row_json(const MetricRow& row)
{
    return {{"tp", row.counts.tp},
            {"fp", row.counts.fp},
            {"fn", row.counts.fn},
            {"precision", round4(row.precision)},
            {"recall", round4(row.recall)},
            {"accuracy", round4(row.accuracy)}};
}

} // namespace

std::string write_report(const EvalReport& report)
{
    nlohmann::json out = nlohmann::json::object();
    for (auto c : kAllCategories)
        out[std::string(category_name(c))] = row_json(report.per_category[index_of(c)]);
    out["totals"] = row_json(report.totals);
    return out.dump(1) + "\n";
}

std::string format_report_table(const EvalReport& report)
{
    std::ostringstream os;
    os << std::left << std::setw(20) << "" << std::right << std::setw(6) << "TP" << std::setw(6) << "FP"
       << std::setw(6) << "FN" << std::setw(11) << "Precision" << std::setw(8) << "Recall" << std::setw(10)
       << "Accuracy" << '\n';
    auto line = [&os](std::string_view name, const MetricRow& r) {
        os << std::left << std::setw(20) << name << std::right << std::setw(6) << r.counts.tp << std::setw(6)
           << r.counts.fp << std::setw(6) << r.counts.fn << std::fixed << std::setprecision(4)
           << std::setw(11) << r.precision << std::setw(8) << r.recall << std::setw(10) << r.accuracy << '\n';
    };
    for (auto c : kAllCategories)
        line(category_name(c), report.per_category[index_of(c)]);
    line("totals", report.totals);
    return os.str();
}

namespace {

// 3x5 bitmap digits, one row per entry, most significant of 3 bits leftmost.
constexpr std::array<std::array<std::uint8_t, 5>, 11> kGlyphs{{
    {7, 5, 5, 5, 7}, // 0
    {2, 6, 2, 2, 7}, // 1
    {7, 1, 7, 4, 7}, // 2
    {7, 1, 7, 1, 7}, // 3
    {5, 5, 7, 1, 1}, // 4
    {7, 4, 7, 1, 7}, // 5
    {7, 4, 7, 5, 7}, // 6
    {7, 1, 1, 1, 1}, // 7
    {7, 5, 7, 5, 7}, // 8
    {7, 5, 7, 1, 7}, // 9
    {0, 0, 0, 0, 2}, // .
}};

constexpr int kGlyphScale = 2;
constexpr int kGlyphWidth = 3 * kGlyphScale;
constexpr int kGlyphHeight = 5 * kGlyphScale;
constexpr int kGlyphAdvance = kGlyphWidth + kGlyphScale;

void fill_clipped(Image3& img, PixelBox r, const std::array<std::uint8_t, 3>& color)
{
    r = {std::max(r.x0, 0), std::max(r.y0, 0), std::min(r.x1, img.width()), std::min(r.y1, img.height())};
    if (r.x0 >= r.x1 || r.y0 >= r.y1)
        return;
    for (int c = 0; c < 3; ++c)
        img.channel(c).block(r.y0, r.x0, r.height(), r.width()).setConstant(color[static_cast<std::size_t>(c)]);
}

void draw_outline(Image3& img, const PixelBox& b, int t, const std::array<std::uint8_t, 3>& color)
{
    fill_clipped(img, {b.x0, b.y0, b.x1, std::min(b.y0 + t, b.y1)}, color);
    fill_clipped(img, {b.x0, std::max(b.y1 - t, b.y0), b.x1, b.y1}, color);
    fill_clipped(img, {b.x0, b.y0, std::min(b.x0 + t, b.x1), b.y1}, color);
    fill_clipped(img, {std::max(b.x1 - t, b.x0), b.y0, b.x1, b.y1}, color);
}

void draw_text(Image3& img, int x, int y, const std::string& text, const std::array<std::uint8_t, 3>& color)
{
    for (char ch : text) {
        std::size_t g = 10;
        if (ch >= '0' && ch <= '9')
            g = static_cast<std::size_t>(ch - '0');
        else if (ch != '.')
            continue;
        for (int row = 0; row < 5; ++row) {
            for (int col = 0; col < 3; ++col) {
                if (kGlyphs[g][static_cast<std::size_t>(row)] & (4 >> col)) {
                    const int px = x + col * kGlyphScale;
                    const int py = y + row * kGlyphScale;
                    fill_clipped(img, {px, py, px + kGlyphScale, py + kGlyphScale}, color);
                }
            }
        }
        x += kGlyphAdvance;
    }
}

} // namespace

Image3 render_eval_overlay(const Image3& image, std::span<const LabeledBox> boxes, const OverlayOptions& options)
{
    Image3 out = image;
    for (const auto& lb : boxes) {
        const auto& color = lb.label == MatchLabel::TruePositive    ? kTruePositiveColor
                            : lb.label == MatchLabel::FalsePositive ? kFalsePositiveColor
                                                                    : kFalseNegativeColor;
        draw_outline(out, lb.box, options.thickness, color);
        if (options.draw_confidence && lb.confidence) {
            char text[16];
            std::snprintf(text, sizeof text, "%.2f", *lb.confidence);
            const int above = lb.box.y0 - kGlyphHeight - 2;
            const int y = above >= 0 ? above : lb.box.y1 + 2;
            draw_text(out, lb.box.x0, y, text, color);
        }
    }
    return out;
}

} // namespace textmap
