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

#include "textmap/lexicon.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "textmap/error.hpp"
#include "textmap/levenshtein.hpp"
#include "textmap/parallel.hpp"
#include "textmap/unicode.hpp"

namespace textmap {

using nlohmann::json;

namespace {

constexpr int kStatsVersion = 1;

void check_options(const StatsOptions& options)
{
    if (!(options.alpha > 0.0) || !std::isfinite(options.alpha))
        throw InputError("alpha must be a finite number > 0, got " + std::to_string(options.alpha));
    if (!(options.fuzzy_floor >= 0.0 && options.fuzzy_floor <= 1.0))
        throw InputError("fuzzy_floor must lie in [0, 1], got " + std::to_string(options.fuzzy_floor));
}

} // namespace

const WordCounts* LexiconStats::find(std::string_view normalized) const
{
    auto it = words.find(normalized);
    return it == words.end() ? nullptr : &it->second;
}

bool LexiconStats::has_category(Category c) const
{
    return std::find(categories.begin(), categories.end(), c) != categories.end();
}

CategorySet assign_word_to_regions(const OcrWord& word, std::span<const GroundTruthRegion> regions)
{
    CategorySet out;
    const std::int64_t area = word.box.area();
    for (const auto& r : regions) {
        // overlap >= area / 2, kept in integers
        if (area > 0 && 2 * intersection_area(word.box, r.box) >= area)
            out.insert(r.category);
    }
    return out;
}

namespace {

LexiconStats empty_stats(const StatsOptions& options)
{
    LexiconStats stats;
    stats.alpha = options.alpha;
    stats.fuzzy_floor = options.fuzzy_floor;
    return stats;
}

void accumulate_document(LexiconStats& stats, const AnnotatedDocument& doc)
{
    for (const auto& word : doc.doc.words) {
        const TokenView token = tokenize(word.raw_text);
        if (token.normalized.empty())
            continue;
        WordCounts& counts = stats.words[token.normalized];
        ++counts.total;
        const CategorySet inside = assign_word_to_regions(word, doc.regions);
        for (auto c : kAllCategories) {
            if (inside.contains(c)) {
                ++counts.in_region[index_of(c)];
                stats.dictionaries[index_of(c)].insert(token.normalized);
            }
        }
    }
}

} // namespace

LexiconStats count_document(const AnnotatedDocument& doc, const StatsOptions& options)
{
    LexiconStats stats = empty_stats(options);
    accumulate_document(stats, doc);
    return stats;
}

LexiconStats build_stats(std::span<const AnnotatedDocument> corpus, const StatsOptions& options,
                         unsigned jobs)
{
    check_options(options);
    if (corpus.empty())
        throw InputError("cannot build stats from an empty corpus");

    // Contiguous shards, one per worker, reduced in shard order.
    const std::size_t shards = std::clamp<std::size_t>(jobs, 1, corpus.size());
    auto partial = parallel_map(shards, jobs, [&](std::size_t s) {
        LexiconStats acc = empty_stats(options);
        const std::size_t begin = corpus.size() * s / shards;
        const std::size_t end = corpus.size() * (s + 1) / shards;
        for (std::size_t i = begin; i < end; ++i)
            accumulate_document(acc, corpus[i]);
        return acc;
    });
    LexiconStats total = std::move(partial.front());
    for (std::size_t s = 1; s < partial.size(); ++s)
        total = merge_stats(total, partial[s]);
    return total;
}

LexiconStats merge_stats(const LexiconStats& a, const LexiconStats& b)
{
    if (a.alpha != b.alpha)
        throw InputError("cannot merge stats with different alpha (" + std::to_string(a.alpha) + " vs " +
                         std::to_string(b.alpha) + ")");
    if (a.fuzzy_floor != b.fuzzy_floor)
        throw InputError("cannot merge stats with different fuzzy_floor (" + std::to_string(a.fuzzy_floor) +
                         " vs " + std::to_string(b.fuzzy_floor) + ")");

    LexiconStats out = a;
    out.categories.clear();
    for (auto c : kAllCategories) {
        if (a.has_category(c) || b.has_category(c))
            out.categories.push_back(c);
    }
    for (const auto& [word, counts] : b.words) {
        WordCounts& dst = out.words[word];
        dst.total += counts.total;
        for (std::size_t c = 0; c < kCategoryCount; ++c)
            dst.in_region[c] += counts.in_region[c];
    }
    for (std::size_t c = 0; c < kCategoryCount; ++c)
        out.dictionaries[c].insert(b.dictionaries[c].begin(), b.dictionaries[c].end());
    return out;
}

void add_dictionary_words(LexiconStats& stats, Category category, std::span<const std::string> words)
{
    if (!stats.has_category(category)) {
        stats.categories.push_back(category);
        std::sort(stats.categories.begin(), stats.categories.end());
    }
    for (const auto& w : words) {
        TokenView token = tokenize(w);
        if (!token.normalized.empty())
            stats.dictionaries[index_of(category)].insert(std::move(token.normalized));
    }
}

double red_score(const LexiconStats& stats, const TokenView& token, Category category)
{
    if (token.normalized.empty())
        return 0.0;
    const WordCounts* counts = stats.find(token.normalized);
    if (counts == nullptr || counts->total == 0)
        return 0.0;
    return static_cast<double>(counts->in_region[index_of(category)]) / static_cast<double>(counts->total);
}

double blue_score(const LexiconStats& stats, const TokenView& token, Category category)
{
    if (token.normalized.empty())
        return 0.0;
    const double alpha = stats.alpha;
    const WordCounts* counts = stats.find(token.normalized);
    if (counts != nullptr && counts->total > 0) {
        const auto n = static_cast<double>(counts->total);
        const auto k = static_cast<double>(counts->in_region[index_of(category)]);
        return (k + alpha) / (n + 2.0 * alpha);
    }

    const std::u32string query = unicode::decode_utf8(token.normalized);
    double best = -1.0; // no candidate yet
    for (const auto& entry : stats.dictionaries[index_of(category)]) {
        const std::u32string candidate = unicode::decode_utf8(entry);
        const std::size_t longest = std::max(query.size(), candidate.size());
        const std::size_t shortest = std::min(query.size(), candidate.size());
        // The length gap alone bounds the similarity from above.
        const double bound = 1.0 - static_cast<double>(longest - shortest) / static_cast<double>(longest);
        if (bound <= best || bound < stats.fuzzy_floor)
            continue;
        best = std::max(best, levenshtein_similarity<char32_t>(query, candidate));
    }
    if (best >= stats.fuzzy_floor)
        return best;
    return alpha / (2.0 * alpha);
}

std::string save_stats(const LexiconStats& stats)
{
    json categories = json::array();
    for (auto c : stats.categories)
        categories.push_back(std::string(category_name(c)));

    json words = json::object();
    for (const auto& [word, counts] : stats.words) {
        json in_region = json::object();
        for (auto c : stats.categories)
            in_region[std::string(category_name(c))] = counts.in_region[index_of(c)];
        words[word] = {{"total", counts.total}, {"in_region", std::move(in_region)}};
    }

    json dictionaries = json::object();
    for (auto c : stats.categories) {
        const auto& dict = stats.dictionaries[index_of(c)];
        dictionaries[std::string(category_name(c))] = std::vector<std::string>(dict.begin(), dict.end());
    }

    json root = {{"version", kStatsVersion},
                 {"alpha", stats.alpha},
                 {"fuzzy_floor", stats.fuzzy_floor},
                 {"categories", std::move(categories)},
                 {"words", std::move(words)},
                 {"dictionaries", std::move(dictionaries)}};
    return root.dump(1) + "\n";
}

namespace {

const json& member(const json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw FormatError("corrupt stats file: missing '" + where + key + "'");
    return *it;
}

std::uint64_t count_value(const json& v, const std::string& where)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw FormatError("corrupt stats file: '" + where + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

} // namespace

LexiconStats load_stats(std::string_view bytes)
{
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw FormatError("corrupt stats file: " + std::string(e.what()));
    }
    if (!root.is_object())
        throw FormatError("corrupt stats file: top level is not an object");

    const json& version = member(root, "version", "");
    if (!version.is_number_integer() || version.get<std::int64_t>() != kStatsVersion)
        throw FormatError("unsupported stats file version: expected " + std::to_string(kStatsVersion) +
                          ", found " + version.dump());

    LexiconStats stats;
    const json& alpha = member(root, "alpha", "");
    const json& floor = member(root, "fuzzy_floor", "");
    if (!alpha.is_number() || !floor.is_number())
        throw FormatError("corrupt stats file: alpha and fuzzy_floor must be numbers");
    stats.alpha = alpha.get<double>();
    stats.fuzzy_floor = floor.get<double>();
    if (!(stats.alpha > 0.0) || !(stats.fuzzy_floor >= 0.0 && stats.fuzzy_floor <= 1.0))
        throw FormatError("corrupt stats file: alpha must be > 0 and fuzzy_floor in [0, 1]");

    const json& categories = member(root, "categories", "");
    if (!categories.is_array())
        throw FormatError("corrupt stats file: 'categories' must be an array");
    stats.categories.clear();
    for (const auto& name : categories) {
        auto c = name.is_string() ? find_category(name.get<std::string>()) : std::nullopt;
        if (!c)
            throw FormatError("corrupt stats file: unknown category " + name.dump());
        if (stats.has_category(*c))
            throw FormatError("corrupt stats file: duplicate category " + name.dump());
        stats.categories.push_back(*c);
    }

    const json& words = member(root, "words", "");
    if (!words.is_object())
        throw FormatError("corrupt stats file: 'words' must be an object");
    for (const auto& [word, record] : words.items()) {
        const std::string where = "words." + word + ".";
        if (!record.is_object())
            throw FormatError("corrupt stats file: '" + where + "' must be an object");
        WordCounts counts;
        counts.total = count_value(member(record, "total", where), where + "total");
        const json& in_region = member(record, "in_region", where);
        if (!in_region.is_object())
            throw FormatError("corrupt stats file: '" + where + "in_region' must be an object");
        for (const auto& [name, value] : in_region.items()) {
            auto c = find_category(name);
            if (!c || !stats.has_category(*c))
                throw FormatError("corrupt stats file: '" + where + "in_region' names undeclared category '" +
                                  name + "'");
            counts.in_region[index_of(*c)] = count_value(value, where + "in_region." + name);
            if (counts.in_region[index_of(*c)] > counts.total)
                throw FormatError("corrupt stats file: '" + where + "in_region." + name +
                                  "' exceeds the total count");
        }
        stats.words.emplace(word, counts);
    }

    const json& dictionaries = member(root, "dictionaries", "");
    if (!dictionaries.is_object())
        throw FormatError("corrupt stats file: 'dictionaries' must be an object");
    for (const auto& [name, entries] : dictionaries.items()) {
        auto c = find_category(name);
        if (!c || !stats.has_category(*c))
            throw FormatError("corrupt stats file: dictionary for undeclared category '" + name + "'");
        if (!entries.is_array())
            throw FormatError("corrupt stats file: dictionary '" + name + "' must be an array");
        for (const auto& e : entries) {
            if (!e.is_string())
                throw FormatError("corrupt stats file: dictionary '" + name + "' holds a non-string");
            stats.dictionaries[index_of(*c)].insert(e.get<std::string>());
        }
    }
    return stats;
}

} // namespace textmap
