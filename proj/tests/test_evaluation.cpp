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

#include "doctest.h"

#include "helpers.hpp"
#include "textmap/error.hpp"
#include "textmap/evaluation.hpp"
#include "json.hpp"

using namespace textmap;

namespace {

DetectionBox pred(PixelBox b, double conf, Category c = Category::Ingredients)
{
    return {b, conf, c};
}

GroundTruthRegion gt(PixelBox b, Category c = Category::Ingredients)
{
    return {c, b};
}

} // namespace

TEST_CASE("iou")
{
    CHECK(iou({0, 0, 10, 10}, {0, 0, 10, 10}) == 1.0);
    CHECK(iou({0, 0, 10, 10}, {20, 20, 30, 30}) == 0.0);
    CHECK(iou({0, 0, 10, 10}, {5, 0, 15, 10}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(iou({0, 0, 0, 0}, {0, 0, 0, 0}) == 0.0);
}

TEST_CASE("match_detections")
{
    const GroundTruthRegion g[] = {gt({0, 0, 100, 100})};
    SUBCASE("perfect match")
    {
        const DetectionBox p[] = {pred({0, 0, 100, 100}, 0.9)};
        CHECK(match_detections(p, g).counts[0] == MatchCounts{1, 0, 0});
    }
    SUBCASE("below the confidence gate")
    {
        const DetectionBox p[] = {pred({0, 0, 100, 100}, 0.6)};
        const auto r = match_detections(p, g);
        CHECK(r.counts[0] == MatchCounts{0, 0, 1});
        REQUIRE(r.labeled.size() == 1);
        CHECK(r.labeled[0].label == MatchLabel::FalseNegative);
    }
    SUBCASE("greedy duplicate")
    {
        const DetectionBox p[] = {pred({0, 0, 90, 100}, 0.8), pred({0, 0, 100, 95}, 0.9)};
        const auto r = match_detections(p, g);
        CHECK(r.counts[0] == MatchCounts{1, 1, 0});
        REQUIRE(r.labeled.size() == 2);
        CHECK(r.labeled[0].box == PixelBox{0, 0, 100, 95});
        CHECK(r.labeled[0].label == MatchLabel::TruePositive);
        CHECK(r.labeled[1].label == MatchLabel::FalsePositive);
    }
    SUBCASE("categories never match each other")
    {
        const DetectionBox p[] = {pred({0, 0, 100, 100}, 0.9, Category::NutritionalFacts)};
        const auto r = match_detections(p, g);
        CHECK(r.counts[0] == MatchCounts{0, 0, 1});
        CHECK(r.counts[1] == MatchCounts{0, 1, 0});
    }
    SUBCASE("highest IoU wins")
    {
        const GroundTruthRegion two[] = {gt({0, 0, 100, 100}), gt({10, 0, 110, 100})};
        const DetectionBox p[] = {pred({9, 0, 109, 100}, 0.9)};
        const auto r = match_detections(p, two);
        CHECK(r.counts[0] == MatchCounts{1, 0, 1});
        CHECK(r.labeled.back().box == PixelBox{0, 0, 100, 100});
    }
    SUBCASE("bad parameters")
    {
        EvalParams params;
        params.iou_threshold = 0.0;
        CHECK_THROWS_AS(params.validate(), InputError);
        params = {};
        params.confidence_threshold = 1.5;
        CHECK_THROWS_AS(params.validate(), InputError);
    }
}

TEST_CASE("metrics")
{
    const auto one = compute_metrics({1, 0, 0});
    CHECK(one.precision == 1.0);
    CHECK(one.recall == 1.0);
    CHECK(one.accuracy == 1.0);

    const auto m = compute_metrics({7, 3, 2});
    CHECK(m.precision == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(m.recall == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
    CHECK(m.accuracy == doctest::Approx(7.0 / 12.0).epsilon(1e-15));

    const auto zero = compute_metrics({0, 0, 0});
    CHECK(zero.precision == 0.0);
    CHECK(zero.recall == 0.0);
    CHECK(zero.accuracy == 0.0);
}

TEST_CASE("report file and table")
{
    const CategoryCounts counts{MatchCounts{7, 3, 2}, MatchCounts{0, 0, 4}};
    const EvalReport r = compute_report(counts);
    CHECK(r.totals.counts == MatchCounts{7, 3, 6});
    const auto j = nlohmann::json::parse(write_report(r));
    CHECK(j["ingredients"]["precision"].get<double>() == 0.7);
    CHECK(j["ingredients"]["recall"].get<double>() == 0.7778);
    CHECK(j["ingredients"]["accuracy"].get<double>() == 0.5833);
    CHECK(j["ingredients"]["tp"].get<int>() == 7);
    CHECK(j["nutritional_facts"]["recall"].get<double>() == 0.0);
    CHECK(j["totals"]["fn"].get<int>() == 6);
    for (const char* key : {"tp", "fp", "fn", "precision", "recall", "accuracy"})
        CHECK(j["nutritional_facts"].contains(key));

    const std::string table = format_report_table(r);
    CHECK(table.find("ingredients") != std::string::npos);
    CHECK(table.find("0.7778") != std::string::npos);
    CHECK(table.find("totals") != std::string::npos);
}

TEST_CASE("overlay")
{
    Image3 image(40, 30);
    for (int c = 0; c < 3; ++c)
        image.channel(c).setConstant(200);

    SUBCASE("no boxes")
    {
        CHECK(render_eval_overlay(image, {}) == image);
    }
    SUBCASE("true positive outline only")
    {
        const LabeledBox b[] = {{{10, 8, 30, 25}, Category::Ingredients, MatchLabel::TruePositive, std::nullopt}};
        const Image3 out = render_eval_overlay(image, b);
        int changed = 0;
        for (int y = 0; y < 30; ++y) {
            for (int x = 0; x < 40; ++x) {
                const bool inside = x >= 10 && x < 30 && y >= 8 && y < 25;
                const bool inner = x >= 13 && x < 27 && y >= 11 && y < 22;
                const bool outline = inside && !inner;
                const bool differs = out(x, y, 0) != 200 || out(x, y, 1) != 200 || out(x, y, 2) != 200;
                CHECK(differs == outline);
                if (outline) {
                    ++changed;
                    CHECK(out(x, y, 0) == 0);
                    CHECK(out(x, y, 1) == 255);
                    CHECK(out(x, y, 2) == 0);
                }
            }
        }
        CHECK(changed == 20 * 17 - 14 * 11);
    }
    SUBCASE("false negative is fuchsia")
    {
        const LabeledBox b[] = {{{5, 5, 20, 20}, Category::Ingredients, MatchLabel::FalseNegative, std::nullopt}};
        const Image3 out = render_eval_overlay(image, b);
        CHECK(out(5, 5, 0) == 255);
        CHECK(out(5, 5, 1) == 0);
        CHECK(out(5, 5, 2) == 255);
    }
    SUBCASE("prediction gets a confidence label")
    {
        const LabeledBox b[] = {{{5, 20, 30, 29}, Category::Ingredients, MatchLabel::FalsePositive, 0.93}};
        const Image3 out = render_eval_overlay(image, b);
        int label_pixels = 0;
        for (int y = 8; y < 18; ++y)
            for (int x = 0; x < 40; ++x)
                label_pixels += out(x, y, 2) == 255 && out(x, y, 0) == 0 ? 1 : 0;
        CHECK(label_pixels > 0);
        OverlayOptions plain;
        plain.draw_confidence = false;
        const Image3 bare = render_eval_overlay(image, b, plain);
        CHECK((bare.channel(0).block(0, 0, 20, 40) == 200).all());
    }
}
