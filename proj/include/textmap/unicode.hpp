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

namespace textmap::unicode {

/// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(std::u32string_view s);

/// Full lowercase mapping followed by canonical composition (NFC).
std::string lower_nfc(std::string_view s);

bool is_punctuation(char32_t c) noexcept;
bool is_space(char32_t c) noexcept;
bool is_decimal_digit(char32_t c) noexcept;

} // namespace textmap::unicode
