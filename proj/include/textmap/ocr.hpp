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

#include "textmap/geometry.hpp"

namespace textmap {

struct OcrWord {
    std::string raw_text;
    PixelBox box;
    double confidence = 1.0;

    friend bool operator==(const OcrWord&, const OcrWord&) = default;
};

/// One OCR'd image: its pixel size and the recognized words in engine order.
struct OcrDocument {
    std::string doc_id;
    int width = 0;
    int height = 0;
    std::vector<OcrWord> words;

    friend bool operator==(const OcrDocument&, const OcrDocument&) = default;
};

/// Normalized view of a raw OCR token plus the character classes it contains.
struct TokenView {
    std::string raw;
    std::string normalized;
    bool has_comma = false;
    bool has_paren = false;
    bool has_digit = false;
    bool has_percent = false;
};

/// Reads the canonical OCR schema:
///
///     {"doc_id": "d1", "image": {"width": 100, "height": 50},
///      "words": [{"text": "milk", "bbox": [x0, y0, x1, y1], "confidence": 0.98}]}
///
/// Boxes partially outside the image are clamped; boxes entirely outside are
/// rejected. Throws ParseError on bad JSON and ValidationError on schema
/// violations.
OcrDocument parse_canonical_ocr(std::string_view bytes);

/// Inverse of parse_canonical_ocr. Output is byte-stable for a given document.
std::string serialize_canonical_ocr(const OcrDocument& doc);

/// Reads a cloud-vision style full-text annotation (pages -> blocks ->
/// paragraphs -> words -> symbols). Also accepts the annotation wrapped in
/// `fullTextAnnotation` or in `responses[0].fullTextAnnotation`.
///
/// A word's text is the concatenation of its symbols; its box is the
/// axis-aligned hull of its bounding polygon. When the annotation carries no
/// page size the image extent is taken from the word polygons.
OcrDocument parse_gcv_annotation(std::string_view bytes, std::string doc_id = "gcv");

/// Lowercases, composes (NFC) and strips leading/trailing punctuation.
/// Digits and '%' are never stripped.
TokenView tokenize(std::string_view raw_text);

/// Reading-order text of the words whose box center falls inside `region`.
/// Words are bucketed into lines by vertical center using the median word
/// height as the bucket size; lines are joined by '\n', words by ' '.
std::string extract_region_text(const OcrDocument& doc, const PixelBox& region);

} // namespace textmap
