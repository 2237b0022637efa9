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
#include <string>
#include <string_view>
#include <vector>

#include "textmap/category.hpp"
#include "textmap/lexicon.hpp"
#include "textmap/ocr.hpp"

namespace textmap {

/// Per-word relevance for one category; each component lies in [0, 1].
struct ScoreTriple {
    double red = 0.0;
    double green = 0.0;
    double blue = 0.0;

    friend bool operator==(const ScoreTriple&, const ScoreTriple&) = default;
};

/// Characters that light up the green channel, per category. Each entry is a
/// string of literal trigger characters, or the class name `[:digit:]` for
/// any decimal digit.
class GreenTriggers {
public:
    static constexpr std::string_view kDigitClass = "[:digit:]";

    /// `,` `(` `)` for ingredients; digits and `%` for nutritional facts.
    static GreenTriggers defaults();

    void set(Category c, std::vector<std::string> triggers);
    const std::vector<std::string>& get(Category c) const { return entries_[index_of(c)]; }

    bool matches(std::string_view raw_text, Category c) const;

    friend bool operator==(const GreenTriggers& a, const GreenTriggers& b) { return a.entries_ == b.entries_; }

private:
    struct Compiled {
        std::u32string literals;
        bool digits = false;
    };

    std::array<std::vector<std::string>, kCategoryCount> entries_;
    std::array<Compiled, kCategoryCount> compiled_;
};

/// Reads `{"<category>": {"green_triggers": ["...", ...]}, ...}`. Categories
/// not mentioned keep their defaults.
GreenTriggers parse_green_triggers(std::string_view bytes);

/// Binary punctuation/number heuristic using the default trigger sets.
double green_score(const TokenView& token, Category category);
double green_score(const TokenView& token, Category category, const GreenTriggers& triggers);

struct ScoringOptions {
    /// Words recognized below this OCR confidence score (0, 0, 0).
    double min_ocr_confidence = 0.0;
    GreenTriggers triggers = GreenTriggers::defaults();
};

ScoreTriple score_word(const LexiconStats& stats, const OcrWord& word, Category category,
                       const ScoringOptions& options = {});

} // namespace textmap
