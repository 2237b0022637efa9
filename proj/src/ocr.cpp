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

#include "textmap/ocr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"

#include "textmap/error.hpp"
#include "textmap/unicode.hpp"

namespace textmap {

using nlohmann::json;

namespace {

json parse_json(std::string_view bytes)
{
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
}

const json& require(const json& obj, const char* key, const std::string& path)
{
    if (!obj.is_object())
        throw ValidationError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

std::string join(const std::string& path, const char* key)
{
    return path.empty() ? std::string(key) : path + "." + key;
}

std::string indexed(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

int require_int(const json& v, const std::string& path)
{
    if (!v.is_number_integer())
        throw ValidationError(path, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ValidationError(path, "integer out of range");
    return static_cast<int>(x);
}

bool is_blank(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

/// Clamps a well-ordered box into the image; throws when nothing remains.
PixelBox clamp_into_image(PixelBox box, int width, int height, const std::string& path)
{
    if (box.x0 >= box.x1 || box.y0 >= box.y1)
        throw ValidationError(path, "degenerate or misordered box (need x0 < x1 and y0 < y1)");
    PixelBox c{std::max(box.x0, 0), std::max(box.y0, 0), std::min(box.x1, width),
               std::min(box.y1, height)};
    if (c.x0 >= c.x1 || c.y0 >= c.y1)
        throw ValidationError(path, "box lies entirely outside the image");
    return c;
}

double require_confidence(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw ValidationError(path, "expected a number");
    const double c = v.get<double>();
    if (!(c >= 0.0 && c <= 1.0))
        throw ValidationError(path, "confidence must lie in [0, 1]");
    return c;
}

} // namespace

OcrDocument parse_canonical_ocr(std::string_view bytes)
{
    const json root = parse_json(bytes);
    if (!root.is_object())
        throw ValidationError("<root>", "expected an object");

    OcrDocument doc;
    const json& id = require(root, "doc_id", "");
    if (!id.is_string() || is_blank(id.get_ref<const std::string&>()))
        throw ValidationError("doc_id", "expected a non-empty string");
    doc.doc_id = id.get<std::string>();

    const json& image = require(root, "image", "");
    doc.width = require_int(require(image, "width", "image"), "image.width");
    doc.height = require_int(require(image, "height", "image"), "image.height");
    if (doc.width <= 0)
        throw ValidationError("image.width", "must be positive");
    if (doc.height <= 0)
        throw ValidationError("image.height", "must be positive");

    const json& words = require(root, "words", "");
    if (!words.is_array())
        throw ValidationError("words", "expected an array");
    doc.words.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::string path = indexed("words", i);
        const json& w = words[i];
        const json& text = require(w, "text", path);
        if (!text.is_string() || is_blank(text.get_ref<const std::string&>()))
            throw ValidationError(join(path, "text"), "expected a non-empty string");

        const json& bbox = require(w, "bbox", path);
        const std::string bbox_path = join(path, "bbox");
        if (!bbox.is_array() || bbox.size() != 4)
            throw ValidationError(bbox_path, "expected [x0, y0, x1, y1]");
        PixelBox box{require_int(bbox[0], indexed(bbox_path, 0)),
                     require_int(bbox[1], indexed(bbox_path, 1)),
                     require_int(bbox[2], indexed(bbox_path, 2)),
                     require_int(bbox[3], indexed(bbox_path, 3))};

        OcrWord word;
        word.raw_text = text.get<std::string>();
        word.box = clamp_into_image(box, doc.width, doc.height, bbox_path);
        word.confidence = require_confidence(require(w, "confidence", path), join(path, "confidence"));
        doc.words.push_back(std::move(word));
    }
    return doc;
}

std::string serialize_canonical_ocr(const OcrDocument& doc)
{
    json words = json::array();
    for (const auto& w : doc.words) {
        words.push_back({{"text", w.raw_text},
                         {"bbox", {w.box.x0, w.box.y0, w.box.x1, w.box.y1}},
                         {"confidence", w.confidence}});
    }
    json root = {{"doc_id", doc.doc_id},
                 {"image", {{"width", doc.width}, {"height", doc.height}}},
                 {"words", std::move(words)}};
    return root.dump() + "\n";
}

namespace {

struct RawGcvWord {
    std::string text;
    PixelBox hull; // unclamped
    double confidence;
    std::string path;
};

const json* find_member(const json& obj, const char* key)
{
    if (!obj.is_object())
        return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& array_or_empty(const json& obj, const char* key, const std::string& path)
{
    static const json empty = json::array();
    const json* v = find_member(obj, key);
    if (v == nullptr || v->is_null())
        return empty;
    if (!v->is_array())
        throw ValidationError(join(path, key), "expected an array");
    return *v;
}

PixelBox polygon_hull(const json& word, const std::string& path)
{
    const json* poly = find_member(word, "boundingBox");
    const char* poly_key = "boundingBox";
    if (poly == nullptr) {
        poly = find_member(word, "boundingPoly");
        poly_key = "boundingPoly";
    }
    if (poly == nullptr)
        throw ValidationError(join(path, "boundingBox"), "missing field");
    const std::string vpath = join(join(path, poly_key), "vertices");
    const json* vertices = find_member(*poly, "vertices");
    if (vertices == nullptr || !vertices->is_array() || vertices->empty())
        throw ValidationError(vpath, "expected a non-empty array of {x, y}");

    int min_x = std::numeric_limits<int>::max();
    int min_y = std::numeric_limits<int>::max();
    int max_x = std::numeric_limits<int>::min();
    int max_y = std::numeric_limits<int>::min();
    for (std::size_t i = 0; i < vertices->size(); ++i) {
        const json& v = (*vertices)[i];
        if (!v.is_object())
            throw ValidationError(indexed(vpath, i), "expected {x, y}");
        // The cloud API omits zero-valued coordinates.
        int x = 0;
        int y = 0;
        if (const json* jx = find_member(v, "x"))
            x = require_int(*jx, join(indexed(vpath, i), "x"));
        if (const json* jy = find_member(v, "y"))
            y = require_int(*jy, join(indexed(vpath, i), "y"));
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
    }
    return {min_x, min_y, max_x, max_y};
}

} // namespace

OcrDocument parse_gcv_annotation(std::string_view bytes, std::string doc_id)
{
    json root = parse_json(bytes);
    if (!root.is_object())
        throw ValidationError("<root>", "expected an object");

    const json* annotation = &root;
    std::string base;
    if (const json* responses = find_member(root, "responses")) {
        if (!responses->is_array())
            throw ValidationError("responses", "expected an array");
        if (responses->empty())
            annotation = nullptr;
        else {
            annotation = &(*responses)[0];
            base = "responses[0]";
        }
    }
    if (annotation != nullptr) {
        if (const json* full = find_member(*annotation, "fullTextAnnotation")) {
            annotation = full;
            base = join(base, "fullTextAnnotation");
        }
    }

    OcrDocument doc;
    doc.doc_id = std::move(doc_id);
    if (doc.doc_id.empty())
        throw ValidationError("doc_id", "expected a non-empty string");

    std::vector<RawGcvWord> raw;
    int page_width = 0;
    int page_height = 0;
    static const json empty_object = json::object();
    const json& ann = annotation != nullptr ? *annotation : empty_object;
    const json& pages = array_or_empty(ann, "pages", base);
    for (std::size_t p = 0; p < pages.size(); ++p) {
        const std::string ppath = indexed(join(base, "pages"), p);
        const json& page = pages[p];
        if (const json* w = find_member(page, "width"))
            page_width = std::max(page_width, require_int(*w, join(ppath, "width")));
        if (const json* h = find_member(page, "height"))
            page_height = std::max(page_height, require_int(*h, join(ppath, "height")));

        const json& blocks = array_or_empty(page, "blocks", ppath);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const std::string bpath = indexed(join(ppath, "blocks"), b);
            const json& paragraphs = array_or_empty(blocks[b], "paragraphs", bpath);
            for (std::size_t g = 0; g < paragraphs.size(); ++g) {
                const std::string gpath = indexed(join(bpath, "paragraphs"), g);
                const json& words = array_or_empty(paragraphs[g], "words", gpath);
                for (std::size_t i = 0; i < words.size(); ++i) {
                    const std::string wpath = indexed(join(gpath, "words"), i);
                    const json& word = words[i];
                    std::string text;
                    const json& symbols = array_or_empty(word, "symbols", wpath);
                    for (std::size_t s = 0; s < symbols.size(); ++s) {
                        const json* t = find_member(symbols[s], "text");
                        if (t == nullptr || !t->is_string())
                            throw ValidationError(join(indexed(join(wpath, "symbols"), s), "text"),
                                                  "expected a string");
                        text += t->get<std::string>();
                    }
                    if (is_blank(text))
                        throw ValidationError(join(wpath, "symbols"), "word has no text");
                    double conf = 1.0;
                    if (const json* c = find_member(word, "confidence"))
                        conf = require_confidence(*c, join(wpath, "confidence"));
                    raw.push_back({std::move(text), polygon_hull(word, wpath), conf, wpath});
                }
            }
        }
    }

    doc.width = page_width;
    doc.height = page_height;
    if (doc.width <= 0 || doc.height <= 0) {
        for (const auto& w : raw) {
            doc.width = std::max(doc.width, w.hull.x1);
            doc.height = std::max(doc.height, w.hull.y1);
        }
        doc.width = std::max(doc.width, 1);
        doc.height = std::max(doc.height, 1);
    }

    doc.words.reserve(raw.size());
    for (auto& w : raw) {
        OcrWord word;
        word.raw_text = std::move(w.text);
        word.box = clamp_into_image(w.hull, doc.width, doc.height, join(w.path, "boundingBox"));
        word.confidence = w.confidence;
        doc.words.push_back(std::move(word));
    }
    return doc;
}

TokenView tokenize(std::string_view raw_text)
{
    TokenView view;
    view.raw = std::string(raw_text);

    for (char32_t c : unicode::decode_utf8(raw_text)) {
        view.has_comma |= c == U',';
        view.has_paren |= c == U'(' || c == U')';
        view.has_digit |= unicode::is_decimal_digit(c);
        view.has_percent |= c == U'%';
    }

    const std::u32string lowered = unicode::decode_utf8(unicode::lower_nfc(raw_text));
    auto strippable = [](char32_t c) {
        return unicode::is_space(c) || (unicode::is_punctuation(c) && c != U'%');
    };
    std::size_t begin = 0;
    std::size_t end = lowered.size();
    while (begin < end && strippable(lowered[begin]))
        ++begin;
    while (end > begin && strippable(lowered[end - 1]))
        --end;
    view.normalized = unicode::encode_utf8(std::u32string_view(lowered).substr(begin, end - begin));
    return view;
}

std::string extract_region_text(const OcrDocument& doc, const PixelBox& region)
{
    struct Selected {
        const OcrWord* word;
        double center_y;
    };
    std::vector<Selected> selected;
    for (const auto& w : doc.words) {
        const double cx = 0.5 * (w.box.x0 + w.box.x1);
        const double cy = 0.5 * (w.box.y0 + w.box.y1);
        if (region.contains_point(cx, cy))
            selected.push_back({&w, cy});
    }
    if (selected.empty())
        return {};

    std::vector<int> heights;
    heights.reserve(selected.size());
    for (const auto& s : selected)
        heights.push_back(s.word->box.height());
    std::sort(heights.begin(), heights.end());
    const std::size_t mid = heights.size() / 2;
    const double bucket = heights.size() % 2 == 1 ? heights[mid]
                                                   : 0.5 * (heights[mid - 1] + heights[mid]);

    std::map<long long, std::vector<const OcrWord*>> lines;
    for (const auto& s : selected)
        lines[static_cast<long long>(std::floor(s.center_y / bucket))].push_back(s.word);

    std::string out;
    for (auto& [key, words] : lines) {
        std::stable_sort(words.begin(), words.end(),
                         [](const OcrWord* a, const OcrWord* b) { return a->box.x0 < b->box.x0; });
        if (!out.empty())
            out += '\n';
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (i > 0)
                out += ' ';
            out += words[i]->raw_text;
        }
    }
    return out;
}

} // namespace textmap
