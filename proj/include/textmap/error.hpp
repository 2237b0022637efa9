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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace textmap {

/// Base of every error raised by the library. Errors derived from InputError
/// are caused by bad user input (files, flags); anything else is internal.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

/// Malformed syntax in a text input.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : InputError(what + " (at byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset)
    {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

/// Well-formed input that violates the schema. `field()` names the offending
/// field as a dotted path, e.g. `words[3].bbox`.
class ValidationError : public InputError {
public:
    ValidationError(std::string field, const std::string& what)
        : InputError(field + ": " + what), field_(std::move(field))
    {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Corrupt, truncated or version-mismatched binary/serialized artifact.
class FormatError : public InputError {
public:
    using InputError::InputError;
};

/// Shapes of two rasters do not agree.
class DimensionError : public InputError {
public:
    using InputError::InputError;
};

} // namespace textmap
