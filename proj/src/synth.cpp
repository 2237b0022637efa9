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

#include "textmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <regex>

#include "textmap/parallel.hpp"
#include "textmap/unicode.hpp"

namespace textmap {

std::vector<std::string> SynthConfig::default_ingredient_vocabulary()
{
    return {"ingredients", "water",      "sugar",       "milk",        "wheat",      "flour",
            "salt",        "butter",     "cream",       "cocoa",       "eggs",       "yeast",
            "honey",       "oats",       "barley",      "rice",        "maize",      "starch",
            "glucose",     "syrup",      "dextrose",    "lactose",     "whey",       "gelatine",
            "pectin",      "lecithin",   "soya",        "sunflower",   "rapeseed",   "palm",
            "olive",       "vinegar",    "tomato",      "onion",       "garlic",     "paprika",
            "pepper",      "cinnamon",   "vanilla",     "almonds",     "hazelnuts",  "peanuts",
            "raisins",     "emulsifier", "thickener",   "stabiliser",  "preservative", "antioxidant",
            "flavouring",  "colour",     "citric",      "acid",        "ascorbic"};
}

std::vector<std::string> SynthConfig::default_nutrient_vocabulary()
{
    return {"nutrition", "information", "typical",     "values",    "energy",     "fat",
            "saturates", "monounsaturates", "polyunsaturates", "carbohydrate", "of", "which",
            "sugars",    "polyols",     "fibre",       "protein",   "sodium",     "cholesterol",
            "calcium",   "iron",        "potassium",   "magnesium", "vitamin",    "reference",
            "intake",    "per",         "serving",     "portion",   "daily",      "kcal"};
}

std::vector<std::string> SynthConfig::default_neutral_vocabulary()
{
    return {"best",     "before",    "store",       "cool",     "dry",       "place",    "keep",
            "refrigerated", "once",  "opened",      "consume",  "within",    "days",     "recycle",
            "packaging", "produced", "packed",      "country",  "origin",    "manufacturer", "address",
            "customer", "service",   "careline",    "visit",    "website",   "brand",    "quality",
            "guaranteed", "net",     "weight",      "batch",    "lot",       "suitable", "vegetarians",
            "allergy",  "advice",    "see",         "bold",     "contains",  "made",     "in"};
}

namespace {

constexpr int kMargin = 24;
constexpr int kGutter = 48;
constexpr int kGridCols = 2;
constexpr int kGridRows = 2;

/// Deterministic draws on top of mt19937_64, whose output sequence is fixed
/// by the standard (the std distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [lo, hi].
    int uniform(int lo, int hi)
    {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v = engine_();
        while (v >= limit)
            v = engine_();
        return lo + static_cast<int>(v % span);
    }

    /// Uniform real in [0, 1) with 53 bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v)
    {
        return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
    }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(uniform(0, static_cast<int>(i) - 1))]);
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::size_t code_points(std::string_view s) { return unicode::decode_utf8(s).size(); }

struct Token {
    std::string text;
    bool typo_eligible = true;
};

struct Geometry {
    int word_height;
    int char_width;
    int space;
    int line_pitch;
};

Geometry pick_geometry(Rng& rng, const SynthConfig& config)
{
    Geometry g{};
    g.word_height = rng.uniform(config.word_height_min, config.word_height_max);
    g.char_width = std::max(4, (g.word_height * 11 + 10) / 20);
    g.space = g.char_width;
    g.line_pitch = g.word_height + std::max(2, g.word_height / 3);
    return g;
}

int token_width(const std::string& text, const Geometry& g)
{
    return static_cast<int>(code_points(text)) * g.char_width;
}

std::string apply_typo(Rng& rng, std::string text)
{
    std::vector<std::size_t> letters;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] >= 'a' && text[i] <= 'z')
            letters.push_back(i);
    }
    if (letters.empty())
        return text;
    const std::size_t at = rng.pick(letters);
    const char original = text[at];
    char replacement = static_cast<char>('a' + rng.uniform(0, 24));
    if (replacement >= original)
        ++replacement;
    text[at] = replacement;
    return text;
}

std::string quantity(Rng& rng)
{
    static const std::vector<std::string> units{"g", "mg", "kcal", "kj"};
    std::string out = std::to_string(rng.uniform(0, 99));
    if (rng.chance(0.5))
        out += "." + std::to_string(rng.uniform(0, 9));
    return out + rng.pick(units);
}

std::vector<Token> ingredient_tokens(Rng& rng, const SynthConfig& config,
                                     const std::vector<std::string>& vocabulary, int count)
{
    std::vector<Token> out;
    if (rng.chance(0.5))
        out.push_back({"ingredients:", true});
    int paren_left = 0;
    while (static_cast<int>(out.size()) < count) {
        std::string word = rng.chance(config.distractor_word_rate) ? rng.pick(config.neutral_vocabulary)
                                                                   : rng.pick(vocabulary);
        if (paren_left == 0 && rng.chance(0.15)) {
            word = "(" + word;
            paren_left = rng.uniform(1, 2);
        }
        if (paren_left > 0 && --paren_left == 0)
            word += ")";
        if (paren_left == 0 && rng.chance(0.6))
            word += ",";
        out.push_back({std::move(word), true});
    }
    if (paren_left > 0)
        out.back().text += ")";
    out.back().text += ".";
    return out;
}

std::vector<Token> nutrition_tokens(Rng& rng, const SynthConfig& config, int count)
{
    std::vector<Token> out;
    if (rng.chance(0.5))
        out.push_back({"nutrition", true});
    while (static_cast<int>(out.size()) < count) {
        out.push_back({rng.chance(config.distractor_word_rate) ? rng.pick(config.neutral_vocabulary)
                                                               : rng.pick(config.nutrient_vocabulary),
                       true});
        out.push_back({quantity(rng), false});
        if (rng.chance(0.4))
            out.push_back({std::to_string(rng.uniform(1, 60)) + "%", false});
    }
    return out;
}

struct Cell {
    int x;
    int y;
    int width;
    int height;
};

/// Flows tokens left to right into lines starting at (x0, y0); stops when the
/// next line would leave the cell. Returns the number of tokens placed.
std::size_t flow(Rng& rng, const SynthConfig& config, const std::vector<Token>& tokens, const Geometry& g,
                 int x0, int y0, int line_width, const Cell& cell, std::vector<OcrWord>& words)
{
    int x = x0;
    int y = y0;
    bool line_empty = true;
    std::size_t placed = 0;
    for (const auto& t : tokens) {
        const std::string text = t.typo_eligible && rng.chance(config.ocr_typo_rate) ? apply_typo(rng, t.text)
                                                                                      : t.text;
        const int w = std::min(token_width(text, g), line_width);
        if (!line_empty && x + w > x0 + line_width) {
            x = x0;
            y += g.line_pitch;
            line_empty = true;
        }
        if (y + g.word_height > cell.y + cell.height)
            break;
        OcrWord word;
        word.raw_text = text;
        word.box = {x, y, x + w, y + g.word_height};
        word.confidence = 0.80 + rng.uniform(0, 19) / 100.0;
        words.push_back(std::move(word));
        ++placed;
        x += w + g.space;
        line_empty = false;
    }
    return placed;
}

int longest_token_width(const SynthConfig& config, int char_width)
{
    std::size_t longest = std::string_view("ingredients:").size();
    for (const auto* vocab : {&config.ingredient_vocabulary, &config.nutrient_vocabulary,
                              &config.neutral_vocabulary}) {
        for (const auto& w : *vocab)
            longest = std::max(longest, code_points(w));
    }
    // "(word)," and "word)." decorations
    return static_cast<int>(longest + 3) * char_width;
}

} // namespace

void SynthConfig::validate() const
{
    auto range = [](const char* name, int lo, int hi, int floor) {
        if (lo < floor || hi < lo)
            throw InputError(std::string(name) + " range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "] is degenerate (need " + std::to_string(floor) + " <= min <= max)");
    };
    range("width", width_min, width_max, 1);
    range("height", height_min, height_max, 1);
    range("regions per category", regions_per_category_min, regions_per_category_max, 0);
    range("words per region", words_per_region_min, words_per_region_max, 1);
    range("word height", word_height_min, word_height_max, 1);
    if (regions_per_category_max > 2)
        throw InputError("regions per category must not exceed 2");
    for (auto [name, rate] : {std::pair{"ocr_typo_rate", ocr_typo_rate},
                              std::pair{"distractor_word_rate", distractor_word_rate},
                              std::pair{"vocab_overlap", vocab_overlap}}) {
        if (!(rate >= 0.0 && rate <= 1.0))
            throw InputError(std::string(name) + " must lie in [0, 1], got " + std::to_string(rate));
    }
    if (ingredient_vocabulary.empty() || nutrient_vocabulary.empty() || neutral_vocabulary.empty())
        throw InputError("vocabularies must not be empty");

    const int cell_width = (width_min - 2 * kMargin - (kGridCols - 1) * kGutter) / kGridCols;
    const int cell_height = (height_min - 2 * kMargin - (kGridRows - 1) * kGutter) / kGridRows;
    const int max_char_width = std::max(4, (word_height_max * 11 + 10) / 20);
    const int max_pitch = word_height_max + std::max(2, word_height_max / 3);
    if (cell_width < longest_token_width(*this, max_char_width) || cell_height < 2 * max_pitch)
        throw LayoutError("infeasible layout: a " + std::to_string(width_min) + "x" + std::to_string(height_min) +
                          " image leaves " + std::to_string(cell_width) + "x" + std::to_string(cell_height) +
                          " px grid cells, too small for words up to " + std::to_string(word_height_max) +
                          " px tall");
}

std::vector<std::string> SynthConfig::effective_ingredient_vocabulary() const
{
    std::vector<std::string> vocab = ingredient_vocabulary;
    const auto shared = static_cast<std::size_t>(
        std::lround(vocab_overlap * static_cast<double>(std::min(ingredient_vocabulary.size(),
                                                                 nutrient_vocabulary.size()))));
    for (std::size_t i = 0; i < shared; ++i) {
        if (std::find(vocab.begin(), vocab.end(), nutrient_vocabulary[i]) == vocab.end())
            vocab.push_back(nutrient_vocabulary[i]);
    }
    return vocab;
}

SynthDocument generate_document(const SynthConfig& config, std::size_t index)
{
    Rng rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(index))));
    const std::vector<std::string> ingredient_vocab = config.effective_ingredient_vocabulary();

    SynthDocument out;
    OcrDocument& doc = out.annotated.doc;
    char id[32];
    std::snprintf(id, sizeof id, "synth_%06zu", index);
    doc.doc_id = id;
    doc.width = rng.uniform(config.width_min, config.width_max);
    doc.height = rng.uniform(config.height_min, config.height_max);
    for (auto& c : out.paper_color)
        c = static_cast<std::uint8_t>(rng.uniform(200, 255));

    const int cell_width = (doc.width - 2 * kMargin - (kGridCols - 1) * kGutter) / kGridCols;
    const int cell_height = (doc.height - 2 * kMargin - (kGridRows - 1) * kGutter) / kGridRows;
    std::vector<Cell> cells;
    for (int r = 0; r < kGridRows; ++r)
        for (int c = 0; c < kGridCols; ++c)
            cells.push_back({kMargin + c * (cell_width + kGutter), kMargin + r * (cell_height + kGutter),
                             cell_width, cell_height});
    rng.shuffle(cells);

    std::vector<Category> wanted;
    for (auto category : kAllCategories) {
        const int k = rng.uniform(config.regions_per_category_min, config.regions_per_category_max);
        wanted.insert(wanted.end(), static_cast<std::size_t>(k), category);
    }
    if (wanted.empty())
        wanted.push_back(kAllCategories[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(kCategoryCount) - 1))]);

    std::size_t next_cell = 0;
    for (auto category : wanted) {
        const Cell& cell = cells[next_cell++];
        const Geometry g = pick_geometry(rng, config);
        const int longest = longest_token_width(config, g.char_width);
        const int line_width = rng.uniform(std::min(cell.width, std::max(longest, cell.width * 3 / 5)), cell.width);
        const int x0 = cell.x + rng.uniform(0, cell.width - line_width);
        const int y0 = cell.y + rng.uniform(0, std::max(0, cell.height / 4 - g.line_pitch));
        const int count = rng.uniform(config.words_per_region_min, config.words_per_region_max);
        const std::vector<Token> tokens = category == Category::Ingredients
                                              ? ingredient_tokens(rng, config, ingredient_vocab, count)
                                              : nutrition_tokens(rng, config, count);

        const std::size_t first = doc.words.size();
        if (flow(rng, config, tokens, g, x0, y0, line_width, cell, doc.words) == 0)
            throw LayoutError("infeasible layout: no word fits in a region cell of " + std::string(doc.doc_id));
        PixelBox extent = doc.words[first].box;
        for (std::size_t i = first + 1; i < doc.words.size(); ++i)
            extent = bounding_union(extent, doc.words[i].box);
        out.annotated.regions.push_back({category, extent});
    }

    for (; next_cell < cells.size(); ++next_cell) {
        const Cell& cell = cells[next_cell];
        if (!rng.chance(0.75))
            continue;
        const Geometry g = pick_geometry(rng, config);
        const int lines = rng.uniform(1, std::max(1, cell.height / g.line_pitch));
        const int per_line = std::max(1, cell.width / (6 * g.char_width + g.space));
        std::vector<Token> tokens;
        for (int i = 0; i < lines * per_line; ++i)
            tokens.push_back({rng.pick(config.neutral_vocabulary), true});
        Cell limited = cell;
        limited.height = std::min(cell.height, lines * g.line_pitch);
        flow(rng, config, tokens, g, cell.x, cell.y, cell.width, limited, doc.words);
    }
    return out;
}

std::vector<SynthDocument> generate_corpus(const SynthConfig& config, std::size_t n, unsigned jobs)
{
    config.validate();
    if (n == 0)
        throw InputError("document count must be >= 1");
    return parallel_map(n, jobs, [&](std::size_t i) { return generate_document(config, i); });
}

Image3 render_synthetic_image(const SynthDocument& doc)
{
    const OcrDocument& d = doc.annotated.doc;
    Image3 image(d.width, d.height);
    for (int c = 0; c < 3; ++c)
        image.channel(c).setConstant(doc.paper_color[static_cast<std::size_t>(c)]);
    for (const auto& w : d.words) {
        for (int c = 0; c < 3; ++c)
            image.channel(c).block(w.box.y0, w.box.x0, w.box.height(), w.box.width()).setConstant(40);
    }
    return image;
}

bool is_quantity_token(std::string_view normalized)
{
    static const std::regex pattern(R"(\d+(\.\d+)?(g|mg|kcal|kj)|\d+%)");
    return std::regex_match(normalized.begin(), normalized.end(), pattern);
}

} // namespace textmap
