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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace textmap {

/// Textual categories a text-map can be rendered for.
enum class Category : std::uint8_t { Ingredients = 0, NutritionalFacts = 1 };

inline constexpr std::size_t kCategoryCount = 2;
inline constexpr std::array<Category, kCategoryCount> kAllCategories{Category::Ingredients,
                                                                     Category::NutritionalFacts};

constexpr std::size_t index_of(Category c) noexcept { return static_cast<std::size_t>(c); }

constexpr std::string_view category_name(Category c) noexcept
{
    switch (c) {
    case Category::Ingredients: return "ingredients";
    case Category::NutritionalFacts: return "nutritional_facts";
    }
    return "?";
}

std::optional<Category> find_category(std::string_view name) noexcept;

/// Like find_category but throws InputError listing the allowed names.
Category parse_category(std::string_view name);

/// "ingredients, nutritional_facts"
std::string allowed_category_names();

/// Small fixed-size set of categories.
class CategorySet {
public:
    constexpr void insert(Category c) noexcept { bits_ |= 1u << index_of(c); }
    constexpr bool contains(Category c) const noexcept { return bits_ & (1u << index_of(c)); }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr std::size_t size() const noexcept
    {
        std::size_t n = 0;
        for (auto c : kAllCategories)
            n += contains(c) ? 1 : 0;
        return n;
    }
    friend constexpr bool operator==(CategorySet, CategorySet) = default;

private:
    unsigned bits_ = 0;
};

} // namespace textmap
