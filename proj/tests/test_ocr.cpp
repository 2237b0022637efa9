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

#include <string>

#include "helpers.hpp"
#include "textmap/annotation.hpp"
#include "textmap/error.hpp"
#include "textmap/ocr.hpp"
#include "textmap/unicode.hpp"

using namespace textmap;

TEST_CASE("canonical OCR: single word")
{
    const auto doc = parse_canonical_ocr(
        R"({"doc_id":"d1","image":{"width":100,"height":50},"words":[{"text":"milk","bbox":[2,2,30,10],"confidence":0.98}]})");
    CHECK(doc.doc_id == "d1");
    CHECK(doc.width == 100);
    CHECK(doc.height == 50);
    REQUIRE(doc.words.size() == 1);
    CHECK(doc.words[0].raw_text == "milk");
    CHECK(doc.words[0].box == PixelBox{2, 2, 30, 10});
    CHECK(doc.words[0].confidence == doctest::Approx(0.98));
}

TEST_CASE("canonical OCR: empty word list")
{
    const auto doc = parse_canonical_ocr(R"({"doc_id":"d1","image":{"width":100,"height":50},"words":[]})");
    CHECK(doc.words.empty());
}

TEST_CASE("canonical OCR: inverted box is rejected")
{
    const std::string bad =
        R"({"doc_id":"d1","image":{"width":100,"height":50},"words":[{"text":"milk","bbox":[30,10,2,2],"confidence":0.9}]})";
    CHECK_THROWS_AS(parse_canonical_ocr(bad), ValidationError);
    try {
        parse_canonical_ocr(bad);
    } catch (const ValidationError& e) {
        CHECK(e.field() == "words[0].bbox");
    }
}

TEST_CASE("canonical OCR: schema violations")
{
    CHECK_THROWS_AS(parse_canonical_ocr("{not json"), ParseError);
    CHECK_THROWS_AS(parse_canonical_ocr(R"({"image":{"width":1,"height":1},"words":[]})"), ValidationError);
    CHECK_THROWS_AS(parse_canonical_ocr(R"({"doc_id":"a","image":{"width":0,"height":1},"words":[]})"),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_canonical_ocr(
            R"({"doc_id":"a","image":{"width":10,"height":10},"words":[{"text":"x","bbox":[1,1,2,2],"confidence":1.5}]})"),
        ValidationError);
    CHECK_THROWS_AS(
        parse_canonical_ocr(
            R"({"doc_id":"a","image":{"width":10,"height":10},"words":[{"text":"x","bbox":[20,20,30,30],"confidence":1}]})"),
        ValidationError);
}

TEST_CASE("canonical OCR: boxes hanging off the image are clamped")
{
    const auto doc = parse_canonical_ocr(
        R"({"doc_id":"a","image":{"width":10,"height":10},"words":[{"text":"x","bbox":[5,5,30,12],"confidence":1}]})");
    CHECK(doc.words[0].box == PixelBox{5, 5, 10, 10});
}

TEST_CASE("canonical OCR: serialize then parse is the identity")
{
    OcrDocument doc{"label-7", 320, 200, {testing::word("Zucker,", 4, 4, 50, 18, 0.75), testing::word("15%", 60, 4, 80, 18)}};
    const std::string bytes = serialize_canonical_ocr(doc);
    CHECK(parse_canonical_ocr(bytes) == doc);
    CHECK(serialize_canonical_ocr(parse_canonical_ocr(bytes)) == bytes);
}

TEST_CASE("GCV annotation: symbols, vertices and page size")
{
    const std::string bytes = testing::slurp(std::string(TEXTMAP_FIXTURE_DIR) + "/gcv_milk.json");
    const auto doc = parse_gcv_annotation(bytes, "fixture");
    CHECK(doc.doc_id == "fixture");
    CHECK(doc.width == 64);
    CHECK(doc.height == 32);
    REQUIRE(doc.words.size() == 2);
    CHECK(doc.words[0].raw_text == "milk");
    CHECK(doc.words[0].box == PixelBox{2, 2, 30, 10});
    CHECK(doc.words[0].confidence == doctest::Approx(0.97));
    CHECK(doc.words[1].raw_text == "15%");
    CHECK(doc.words[1].box == PixelBox{5, 0, 20, 15});
    CHECK(doc.words[1].confidence == 1.0);
}

TEST_CASE("GCV annotation: empty object")
{
    CHECK(parse_gcv_annotation("{}").words.empty());
    CHECK_THROWS_AS(parse_gcv_annotation("[1,2"), ParseError);
}

TEST_CASE("tokenize")
{
    SUBCASE("trailing comma")
    {
        const auto t = tokenize("Milk,");
        CHECK(t.normalized == "milk");
        CHECK(t.has_comma);
        CHECK_FALSE(t.has_paren);
        CHECK_FALSE(t.has_digit);
        CHECK_FALSE(t.has_percent);
    }
    SUBCASE("percentage keeps digits and percent")
    {
        const auto t = tokenize("15%");
        CHECK(t.normalized == "15%");
        CHECK(t.has_digit);
        CHECK(t.has_percent);
        CHECK_FALSE(t.has_comma);
    }
    SUBCASE("punctuation only")
    {
        const auto t = tokenize("(");
        CHECK(t.normalized.empty());
        CHECK(t.has_paren);
    }
    SUBCASE("unicode case folding and composition")
    {
        // "E" + combining acute, uppercase
        CHECK(tokenize("CAF\x45\xCC\x81:").normalized == "caf\xC3\xA9");
        CHECK(tokenize("\xC3\x96L").normalized == "\xC3\xB6l");
    }
    SUBCASE("inner punctuation survives")
    {
        CHECK(tokenize("(semi-skimmed)").normalized == "semi-skimmed");
    }
    SUBCASE("non-ASCII digits count as digits")
    {
        CHECK(tokenize("\xD9\xA3g").has_digit); // ARABIC-INDIC DIGIT THREE
    }
}

TEST_CASE("unicode helpers")
{
    CHECK(unicode::encode_utf8(unicode::decode_utf8("s\xC3\xBC\xC3\x9F")) == "s\xC3\xBC\xC3\x9F");
    CHECK(unicode::decode_utf8("\xFF") == std::u32string(1, U'\uFFFD'));
    CHECK(unicode::is_punctuation(U','));
    CHECK_FALSE(unicode::is_punctuation(U'a'));
    CHECK(unicode::is_decimal_digit(U'7'));
}

TEST_CASE("extract_region_text")
{
    SUBCASE("empty document")
    {
        CHECK(extract_region_text(OcrDocument{"e", 10, 10, {}}, {0, 0, 10, 10}).empty());
    }
    SUBCASE("line bucketing by median height")
    {
        OcrDocument doc{"d", 100, 100,
                        {testing::word("water", 0, 25, 20, 35), testing::word("salt", 25, 1, 40, 11),
                         testing::word("sugar", 0, 0, 20, 10)}};
        CHECK(extract_region_text(doc, {0, 0, 100, 100}) == "sugar salt\nwater");
    }
    SUBCASE("center on the right edge is outside")
    {
        OcrDocument doc{"d", 100, 100, {testing::word("edge", 40, 0, 60, 10), testing::word("in", 0, 0, 10, 10)}};
        CHECK(extract_region_text(doc, {0, 0, 50, 20}) == "in");
    }
}

TEST_CASE("annotation files")
{
    const AnnotationFile ann{"d1", {{Category::Ingredients, {1, 2, 30, 40}}, {Category::NutritionalFacts, {0, 0, 5, 5}}}};
    CHECK(parse_annotation(serialize_annotation(ann)) == ann);
    CHECK_THROWS_AS(parse_annotation(R"({"doc_id":"d1","regions":[{"category":"allergens","bbox":[0,0,1,1]}]})"),
                    InputError);

    OcrDocument doc{"d1", 20, 20, {}};
    CHECK_THROWS_AS(attach_annotation(doc, ann), ValidationError); // region exceeds the image
    CHECK_THROWS_AS(attach_annotation(OcrDocument{"other", 100, 100, {}}, ann), InputError);
    CHECK(attach_annotation(OcrDocument{"d1", 100, 100, {}}, ann).regions == ann.regions);
}
