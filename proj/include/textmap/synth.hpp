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
#include <string>
#include <string_view>
#include <vector>

#include "textmap/annotation.hpp"
#include "textmap/error.hpp"
#include "textmap/raster.hpp"

namespace textmap {

/// Knobs of the synthetic packaging-label generator. Every document is a
/// pure function of (seed, document index, config).
struct SynthConfig {
    std::uint64_t seed = 42;
    int width_min = 640;
    int width_max = 960;
    int height_min = 640;
    int height_max = 960;
    int regions_per_category_min = 0;
    int regions_per_category_max = 2;
    int words_per_region_min = 12;
    int words_per_region_max = 36;
    int word_height_min = 12;
    int word_height_max = 18;
    double ocr_typo_rate = 0.02;
    double distractor_word_rate = 0.0;
    /// Fraction of the nutrient vocabulary also used as ingredient words.
    double vocab_overlap = 0.0;
    std::vector<std::string> ingredient_vocabulary = default_ingredient_vocabulary();
    std::vector<std::string> nutrient_vocabulary = default_nutrient_vocabulary();
    std::vector<std::string> neutral_vocabulary = default_neutral_vocabulary();

    static std::vector<std::string> default_ingredient_vocabulary();
    static std::vector<std::string> default_nutrient_vocabulary();
    static std::vector<std::string> default_neutral_vocabulary();

    /// Throws InputError for degenerate ranges, rates outside [0, 1] or
    /// empty vocabularies.
    void validate() const;

    /// Ingredient vocabulary after applying vocab_overlap.
    std::vector<std::string> effective_ingredient_vocabulary() const;
};

struct SynthDocument {
    AnnotatedDocument annotated;
    std::array<std::uint8_t, 3> paper_color{255, 255, 255};
};

/// Thrown when the requested layout cannot fit the image size range.
class LayoutError : public InputError {
public:
    using InputError::InputError;
};

/// `n` documents named `synth_000000`, `synth_000001`, ... Regions sit in
/// distinct cells of a 2x2 grid, are filled with line-wrapped category words
/// (commas and parentheses in ingredient lists, quantities and percentages
/// in nutrition tables) and the remaining cells get neutral text.
std::vector<SynthDocument> generate_corpus(const SynthConfig& config, std::size_t n, unsigned jobs = 1);

SynthDocument generate_document(const SynthConfig& config, std::size_t index);

/// Flat paper-colored raster with every word box painted dark.
Image3 render_synthetic_image(const SynthDocument& doc);

/// True for generated quantity tokens such as "12g", "3.5mg", "250kcal", "8%".
bool is_quantity_token(std::string_view normalized);

} // namespace textmap
