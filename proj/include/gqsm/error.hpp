// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The gqsm-capacity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace gqsm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration field holds an invalid value.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error("invalid `" + field + "`: " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// An activation-pattern set violates the structural constraints of a scheme.
class SchemeViolation : public Error {
public:
    SchemeViolation(std::size_t pattern_index, const std::string& what)
        : Error("pattern " + std::to_string(pattern_index) + ": " + what), index_(pattern_index) {}

    std::size_t pattern_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidPattern : public Error {
public:
    using Error::Error;
};

/// Two codewords of a codebook coincide.
class DuplicateCodeword : public Error {
public:
    DuplicateCodeword(std::size_t first, std::size_t second)
        : Error("codewords " + std::to_string(first) + " and " + std::to_string(second) + " coincide"),
          first_(first), second_(second) {}

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

/// Enumeration would exceed the configured combinatorial cap.
class EnumerationOverflow : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// Text input (config, pattern file, CSV) could not be parsed.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace gqsm
