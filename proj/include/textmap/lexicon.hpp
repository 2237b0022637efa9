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
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textmap/annotation.hpp"
#include "textmap/category.hpp"
#include "textmap/ocr.hpp"

namespace textmap {

struct WordCounts {
    std::uint64_t total = 0;
    std::array<std::uint64_t, kCategoryCount> in_region{};

    friend bool operator==(const WordCounts&, const WordCounts&) = default;
};

/// Per-word occurrence statistics over a ground-truth corpus, together with
/// the per-category dictionaries and the scoring constants.
///
/// Invariant: in_region[c] <= total for every word. Dictionaries built from
/// a corpus hold exactly the words with in_region[c] > 0; dictionaries loaded
/// from external word lists may hold more.
struct LexiconStats {
    static constexpr double kDefaultAlpha = 1.0;
    static constexpr double kDefaultFuzzyFloor = 0.8;

    double alpha = kDefaultAlpha;
    double fuzzy_floor = kDefaultFuzzyFloor;
    std::vector<Category> categories{kAllCategories.begin(), kAllCategories.end()};
    std::map<std::string, WordCounts, std::less<>> words;
    std::array<std::set<std::string, std::less<>>, kCategoryCount> dictionaries;

    const WordCounts* find(std::string_view normalized) const;
    bool has_category(Category c) const;

    friend bool operator==(const LexiconStats&, const LexiconStats&) = default;
};

struct StatsOptions {
    double alpha = LexiconStats::kDefaultAlpha;
    double fuzzy_floor = LexiconStats::kDefaultFuzzyFloor;
};

/// Categories of the regions covering at least half of the word's box area.
CategorySet assign_word_to_regions(const OcrWord& word, std::span<const GroundTruthRegion> regions);

/// Stats of a single document (no corpus-emptiness check).
LexiconStats count_document(const AnnotatedDocument& doc, const StatsOptions& options = {});

/// Counts every word token of the corpus. With jobs > 1 documents are
/// counted concurrently and reduced with merge_stats; the result is identical.
/// Throws InputError on an empty corpus or out-of-range options.
LexiconStats build_stats(std::span<const AnnotatedDocument> corpus, const StatsOptions& options = {},
                         unsigned jobs = 1);

/// Sums counts and unions dictionaries. Both operands must share alpha and
/// fuzzy_floor.
LexiconStats merge_stats(const LexiconStats& a, const LexiconStats& b);

/// Adds externally curated words to a category dictionary (normalized with
/// tokenize; empty results skipped).
void add_dictionary_words(LexiconStats& stats, Category category, std::span<const std::string> words);

/// Fraction of the token's occurrences that fell inside `category` regions.
double red_score(const LexiconStats& stats, const TokenView& token, Category category);

/// Laplace-smoothed posterior (k + alpha) / (n + 2 alpha) of the token
/// belonging to `category`. Unseen tokens fall back to their best
/// edit-distance similarity against the category dictionary when that reaches
/// fuzzy_floor, and to the uninformed prior 0.5 otherwise.
double blue_score(const LexiconStats& stats, const TokenView& token, Category category);

/// Stats file, version 1. Keys are sorted so the output is byte-stable.
std::string save_stats(const LexiconStats& stats);

/// Throws FormatError on corrupt input or an unsupported version.
LexiconStats load_stats(std::string_view bytes);

} // namespace textmap
