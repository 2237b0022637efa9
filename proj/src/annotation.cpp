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

#include "textmap/annotation.hpp"

#include "json.hpp"

#include "textmap/error.hpp"

namespace textmap {

using nlohmann::json;

AnnotationFile parse_annotation(std::string_view bytes)
{
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
    if (!root.is_object())
        throw ValidationError("<root>", "expected an object");

    AnnotationFile ann;
    auto id = root.find("doc_id");
    if (id == root.end() || !id->is_string() || id->get_ref<const std::string&>().empty())
        throw ValidationError("doc_id", "expected a non-empty string");
    ann.doc_id = id->get<std::string>();

    auto regions = root.find("regions");
    if (regions == root.end())
        throw ValidationError("regions", "missing field");
    if (!regions->is_array())
        throw ValidationError("regions", "expected an array");
    for (std::size_t i = 0; i < regions->size(); ++i) {
        const std::string path = "regions[" + std::to_string(i) + "]";
        const json& r = (*regions)[i];
        if (!r.is_object())
            throw ValidationError(path, "expected an object");
        auto cat = r.find("category");
        if (cat == r.end() || !cat->is_string())
            throw ValidationError(path + ".category", "expected a category name");
        auto found = find_category(cat->get<std::string>());
        if (!found)
            throw ValidationError(path + ".category", "unknown category '" + cat->get<std::string>() +
                                                          "' (allowed: " + allowed_category_names() + ")");
        auto bbox = r.find("bbox");
        if (bbox == r.end() || !bbox->is_array() || bbox->size() != 4 ||
            !std::all_of(bbox->begin(), bbox->end(), [](const json& v) { return v.is_number_integer(); }))
            throw ValidationError(path + ".bbox", "expected [x0, y0, x1, y1] integers");
        PixelBox box{(*bbox)[0].get<int>(), (*bbox)[1].get<int>(), (*bbox)[2].get<int>(),
                     (*bbox)[3].get<int>()};
        if (!box.valid())
            throw ValidationError(path + ".bbox", "degenerate, misordered or negative box");
        ann.regions.push_back({*found, box});
    }
    return ann;
}

std::string serialize_annotation(const AnnotationFile& ann)
{
    json regions = json::array();
    for (const auto& r : ann.regions) {
        regions.push_back({{"category", std::string(category_name(r.category))},
                           {"bbox", {r.box.x0, r.box.y0, r.box.x1, r.box.y1}}});
    }
    return json{{"doc_id", ann.doc_id}, {"regions", std::move(regions)}}.dump() + "\n";
}

AnnotatedDocument attach_annotation(OcrDocument doc, const AnnotationFile& ann)
{
    if (doc.doc_id != ann.doc_id)
        throw ValidationError("doc_id", "annotation is for '" + ann.doc_id + "' but OCR document is '" +
                                            doc.doc_id + "'");
    for (std::size_t i = 0; i < ann.regions.size(); ++i) {
        const PixelBox& b = ann.regions[i].box;
        if (b.x1 > doc.width || b.y1 > doc.height)
            throw ValidationError("regions[" + std::to_string(i) + "].bbox",
                                  "region exceeds the " + std::to_string(doc.width) + "x" +
                                      std::to_string(doc.height) + " image");
    }
    return {std::move(doc), ann.regions};
}

} // namespace textmap
