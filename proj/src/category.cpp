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

#include "textmap/category.hpp"

#include "textmap/error.hpp"

namespace textmap {

std::optional<Category> find_category(std::string_view name) noexcept
{
    for (auto c : kAllCategories) {
        if (category_name(c) == name)
            return c;
    }
    return std::nullopt;
}

Category parse_category(std::string_view name)
{
    if (auto c = find_category(name))
        return *c;
    throw InputError("unknown category '" + std::string(name) + "' (allowed: " +
                     allowed_category_names() + ")");
}

std::string allowed_category_names()
{
    std::string out;
    for (auto c : kAllCategories) {
        if (!out.empty())
            out += ", ";
        out += category_name(c);
    }
    return out;
}

} // namespace textmap
