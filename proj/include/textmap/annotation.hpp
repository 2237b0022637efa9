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

#include <string>
#include <string_view>
#include <vector>

#include "textmap/category.hpp"
#include "textmap/geometry.hpp"
#include "textmap/ocr.hpp"

namespace textmap {

struct GroundTruthRegion {
    Category category = Category::Ingredients;
    PixelBox box;

    friend bool operator==(const GroundTruthRegion&, const GroundTruthRegion&) = default;
};

struct AnnotatedDocument {
    OcrDocument doc;
    std::vector<GroundTruthRegion> regions;

    friend bool operator==(const AnnotatedDocument&, const AnnotatedDocument&) = default;
};

/// Annotation file contents: `{"doc_id": ..., "regions": [{"category": ..., "bbox": [...]}]}`.
struct AnnotationFile {
    std::string doc_id;
    std::vector<GroundTruthRegion> regions;

    friend bool operator==(const AnnotationFile&, const AnnotationFile&) = default;
};

AnnotationFile parse_annotation(std::string_view bytes);
std::string serialize_annotation(const AnnotationFile& ann);

/// Pairs an OCR document with its annotation. Region boxes must lie inside the
/// document image (ValidationError otherwise) and doc ids must agree.
AnnotatedDocument attach_annotation(OcrDocument doc, const AnnotationFile& ann);

} // namespace textmap
