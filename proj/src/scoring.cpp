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

#include "textmap/scoring.hpp"

#include <algorithm>

#include "json.hpp"

#include "textmap/error.hpp"
#include "textmap/unicode.hpp"

namespace textmap {

GreenTriggers GreenTriggers::defaults()
{
    GreenTriggers t;
    t.set(Category::Ingredients, {",", "(", ")"});
    t.set(Category::NutritionalFacts, {std::string(kDigitClass), "%"});
    return t;
}

void GreenTriggers::set(Category c, std::vector<std::string> triggers)
{
    Compiled compiled;
    for (const auto& t : triggers) {
        if (t == kDigitClass)
            compiled.digits = true;
        else
            compiled.literals += unicode::decode_utf8(t);
    }
    entries_[index_of(c)] = std::move(triggers);
    compiled_[index_of(c)] = std::move(compiled);
}

bool GreenTriggers::matches(std::string_view raw_text, Category c) const
{
    const Compiled& compiled = compiled_[index_of(c)];
    for (char32_t ch : unicode::decode_utf8(raw_text)) {
        if (compiled.digits && unicode::is_decimal_digit(ch))
            return true;
        if (compiled.literals.find(ch) != std::u32string::npos)
            return true;
    }
    return false;
}

GreenTriggers parse_green_triggers(std::string_view bytes)
{
    using nlohmann::json;
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed trigger config: ") + e.what(), e.byte);
    }
    if (!root.is_object())
        throw ValidationError("<root>", "expected an object keyed by category");

    GreenTriggers triggers = GreenTriggers::defaults();
    for (const auto& [name, entry] : root.items()) {
        auto c = find_category(name);
        if (!c)
            throw ValidationError(name, "unknown category (allowed: " + allowed_category_names() + ")");
        auto list = entry.find("green_triggers");
        if (!entry.is_object() || list == entry.end() || !list->is_array())
            throw ValidationError(name + ".green_triggers", "expected an array of strings");
        std::vector<std::string> values;
        for (const auto& v : *list) {
            if (!v.is_string() || v.get_ref<const std::string&>().empty())
                throw ValidationError(name + ".green_triggers", "expected non-empty strings");
            values.push_back(v.get<std::string>());
        }
        triggers.set(*c, std::move(values));
    }
    return triggers;
}

double green_score(const TokenView& token, Category category)
{
    switch (category) {
    case Category::Ingredients: return token.has_comma || token.has_paren ? 1.0 : 0.0;
    case Category::NutritionalFacts: return token.has_digit || token.has_percent ? 1.0 : 0.0;
    }
    return 0.0;
}

double green_score(const TokenView& token, Category category, const GreenTriggers& triggers)
{
    return triggers.matches(token.raw, category) ? 1.0 : 0.0;
}

ScoreTriple score_word(const LexiconStats& stats, const OcrWord& word, Category category,
                       const ScoringOptions& options)
{
    if (word.confidence < options.min_ocr_confidence)
        return {};
    const TokenView token = tokenize(word.raw_text);
    return {red_score(stats, token, category), green_score(token, category, options.triggers),
            blue_score(stats, token, category)};
}

} // namespace textmap
