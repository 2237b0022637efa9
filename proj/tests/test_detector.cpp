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

#include <random>

#include "oracles.hpp"
#include "textmap/detector.hpp"
#include "textmap/error.hpp"

using namespace textmap;

namespace {

void fill(TextMap& m, const PixelBox& b, std::uint8_t v, int channel = 0)
{
    m.channel(channel).block(b.y0, b.x0, b.height(), b.width()).setConstant(v);
}

} // namespace

TEST_CASE("detect_regions")
{
    SUBCASE("all-zero map")
    {
        CHECK(detect_regions(TextMap(64, 64), Category::Ingredients).empty());
    }
    SUBCASE("solid rectangle")
    {
        TextMap m(80, 60);
        fill(m, {10, 10, 50, 30}, 200, 2);
        const auto boxes = detect_regions(m, Category::NutritionalFacts);
        REQUIRE(boxes.size() == 1);
        CHECK(boxes[0].box == PixelBox{10, 10, 50, 30});
        CHECK(boxes[0].confidence == doctest::Approx(200.0 / 255.0).epsilon(1e-12));
        CHECK(boxes[0].category == Category::NutritionalFacts);
    }
    SUBCASE("relevance at the threshold is background")
    {
        TextMap m(80, 60);
        fill(m, {10, 10, 50, 30}, 128);
        CHECK(detect_regions(m, Category::Ingredients).empty());
    }
    SUBCASE("gap wider than twice the radius keeps blobs apart")
    {
        TextMap m(120, 40);
        fill(m, {0, 0, 30, 30}, 255);
        fill(m, {47, 0, 77, 30}, 200);
        const auto boxes = detect_regions(m, Category::Ingredients);
        REQUIRE(boxes.size() == 2);
        CHECK(boxes[0].box == PixelBox{0, 0, 30, 30});
        CHECK(boxes[1].box == PixelBox{47, 0, 77, 30});
    }
    SUBCASE("gap of twice the radius merges")
    {
        TextMap m(120, 40);
        fill(m, {0, 0, 30, 30}, 255);
        fill(m, {46, 0, 76, 30}, 200);
        const auto boxes = detect_regions(m, Category::Ingredients);
        REQUIRE(boxes.size() == 1);
        CHECK(boxes[0].box == PixelBox{0, 0, 76, 30});
        CHECK(boxes[0].confidence == doctest::Approx((255.0 + 200.0) / 2.0 / 255.0).epsilon(1e-12));
    }
    SUBCASE("small components are dropped")
    {
        TextMap m(60, 60);
        fill(m, {0, 0, 19, 21}, 255);
        DetectorParams p;
        CHECK(detect_regions(m, Category::Ingredients, p).empty());
        p.min_area = 399;
        CHECK(detect_regions(m, Category::Ingredients, p).size() == 1);
    }
    SUBCASE("invalid parameters")
    {
        DetectorParams p;
        p.close_radius = -1;
        CHECK_THROWS_AS(detect_regions(TextMap(4, 4), Category::Ingredients, p), InputError);
        p = {};
        p.binarize_threshold = 300;
        CHECK_THROWS_AS(p.validate(), InputError);
    }
}

TEST_CASE("closing never shrinks shapes touching the border")
{
    Mask a = Mask::Zero(20, 20);
    a.block(0, 0, 5, 20).setOnes();
    const Mask closed = close(a, 4);
    CHECK((closed == a).all());
    CHECK((dilate(a, 4).block(0, 0, 9, 20) == 1).all());
    CHECK((erode(a, 2).block(0, 0, 3, 20) == 1).all());
    CHECK((erode(a, 2).block(3, 0, 17, 20) == 0).all());
}

TEST_CASE("detector agrees with the flood-fill oracle")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int w = std::uniform_int_distribution<int>(1, 70)(rng);
        const int h = std::uniform_int_distribution<int>(1, 70)(rng);
        TextMap m(w, h);
        const int blobs = std::uniform_int_distribution<int>(0, 8)(rng);
        for (int i = 0; i < blobs; ++i) {
            const int x0 = std::uniform_int_distribution<int>(0, w - 1)(rng);
            const int y0 = std::uniform_int_distribution<int>(0, h - 1)(rng);
            const int x1 = std::min(w, x0 + std::uniform_int_distribution<int>(1, 20)(rng));
            const int y1 = std::min(h, y0 + std::uniform_int_distribution<int>(1, 12)(rng));
            fill(m, {x0, y0, x1, y1}, static_cast<std::uint8_t>(rng()), static_cast<int>(rng() % 3));
        }
        DetectorParams p;
        p.close_radius = std::uniform_int_distribution<int>(0, 6)(rng);
        p.min_area = std::uniform_int_distribution<int>(1, 60)(rng);
        p.binarize_threshold = std::uniform_int_distribution<int>(0, 200)(rng);
        const auto got = detect_regions(m, Category::Ingredients, p);
        const auto want = oracle::flood_fill_detect(m, Category::Ingredients, p);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].box == want[i].box);
            CHECK(std::abs(got[i].confidence - want[i].confidence) <= 1e-9);
        }
    }
}

TEST_CASE("detections file")
{
    const std::vector<DocumentDetection> d{{"a", {{1, 2, 3, 4}, 0.875, Category::NutritionalFacts}},
                                           {"b", {{0, 0, 9, 9}, 1.0 / 3.0, Category::Ingredients}}};
    const auto back = parse_detections(write_detections(d));
    CHECK(back == d);
    CHECK(parse_detections("[]").empty());
    CHECK_THROWS_AS(parse_detections(R"([{"doc_id":"a","category":"x","bbox":[0,0,1,1],"confidence":1}])"),
                    InputError);
}
