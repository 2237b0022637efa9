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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "textmap/annotation.hpp"
#include "textmap/ocr.hpp"

namespace testing {

inline textmap::OcrWord word(std::string text, int x0, int y0, int x1, int y1, double confidence = 1.0)
{
    return {std::move(text), {x0, y0, x1, y1}, confidence};
}

inline textmap::AnnotatedDocument annotated(std::string id, int w, int h, std::vector<textmap::OcrWord> words,
                                            std::vector<textmap::GroundTruthRegion> regions = {})
{
    return {{std::move(id), w, h, std::move(words)}, std::move(regions)};
}

/// Random small corpus over a fixed word pool; regions are random boxes.
inline std::vector<textmap::AnnotatedDocument> random_corpus(std::mt19937_64& rng, int max_words)
{
    static const std::vector<std::string> pool{"milk", "Sugar,", "salt", "(soy", "lecithin)", "fat",
                                               "12g",  "5%",     "energy", "Water", "cocoa", "protein",
                                               "salz", "sodium", "oil",  "(", "Fibre:", "bake"};
    std::uniform_int_distribution<int> ndocs(1, 6);
    std::vector<textmap::AnnotatedDocument> corpus;
    int budget = max_words;
    const int docs = ndocs(rng);
    for (int d = 0; d < docs && budget > 0; ++d) {
        const int w = std::uniform_int_distribution<int>(20, 200)(rng);
        const int h = std::uniform_int_distribution<int>(20, 200)(rng);
        textmap::AnnotatedDocument doc;
        doc.doc.doc_id = "doc" + std::to_string(d);
        doc.doc.width = w;
        doc.doc.height = h;
        const int words = std::min(budget, std::uniform_int_distribution<int>(0, max_words / docs + 1)(rng));
        budget -= words;
        auto box = [&] {
            const int x0 = std::uniform_int_distribution<int>(0, w - 2)(rng);
            const int y0 = std::uniform_int_distribution<int>(0, h - 2)(rng);
            const int x1 = std::uniform_int_distribution<int>(x0 + 1, std::min(w, x0 + 40))(rng);
            const int y1 = std::uniform_int_distribution<int>(y0 + 1, std::min(h, y0 + 20))(rng);
            return textmap::PixelBox{x0, y0, x1, y1};
        };
        for (int i = 0; i < words; ++i)
            doc.doc.words.push_back(
                {pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)], box(), 1.0});
        const int regions = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int i = 0; i < regions; ++i) {
            const auto c = std::uniform_int_distribution<int>(0, 1)(rng) ? textmap::Category::Ingredients
                                                                         : textmap::Category::NutritionalFacts;
            textmap::PixelBox b = box();
            b.x1 = std::min(w, b.x0 + std::uniform_int_distribution<int>(1, w)(rng));
            b.y1 = std::min(h, b.y0 + std::uniform_int_distribution<int>(1, h)(rng));
            doc.regions.push_back({c, b});
        }
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& name)
    {
        path_ = std::filesystem::temp_directory_path() /
                ("textmap_" + name + "_" + std::to_string(std::random_device{}()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& bytes)
{
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << bytes;
}

} // namespace testing
