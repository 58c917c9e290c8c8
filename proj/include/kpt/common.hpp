/*
 * Copyright 2026 The KPT Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace kpt {

/// Every failure the engine reports carries one of these kinds so callers
/// (and tests) can branch on the category without parsing messages.
enum class ErrorKind {
  EmptySource,
  MalformedLine,
  DuplicateEdge,
  ConflictingPolarity,
  AmbiguousClassName,
  InvalidClassSpec,
  InvalidTemplate,
  MissingSlot,
  BadMagic,
  VersionMismatch,
  DimensionMismatch,
  TruncatedPayload,
  TrailingData,
  OutOfRange,
  MissingWord,
  EmptyClassAfterFilter,
  EmptySupport,
  DegenerateProfile,
  DegeneratePrior,
  NonpositiveScore,
  InsufficientInstances,
  LengthMismatch,
  EmptyInput,
  SupportTooLarge,
  InvalidArgument,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptySource: return "EmptySource";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::ConflictingPolarity: return "ConflictingPolarity";
    case ErrorKind::AmbiguousClassName: return "AmbiguousClassName";
    case ErrorKind::InvalidClassSpec: return "InvalidClassSpec";
    case ErrorKind::InvalidTemplate: return "InvalidTemplate";
    case ErrorKind::MissingSlot: return "MissingSlot";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TruncatedPayload: return "TruncatedPayload";
    case ErrorKind::TrailingData: return "TrailingData";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::MissingWord: return "MissingWord";
    case ErrorKind::EmptyClassAfterFilter: return "EmptyClassAfterFilter";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::DegenerateProfile: return "DegenerateProfile";
    case ErrorKind::DegeneratePrior: return "DegeneratePrior";
    case ErrorKind::NonpositiveScore: return "NonpositiveScore";
    case ErrorKind::InsufficientInstances: return "InsufficientInstances";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::SupportTooLarge: return "SupportTooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Error that points at a position in a text file or matrix.
class LocatedError : public Error {
 public:
  LocatedError(ErrorKind kind, const std::string& detail, std::size_t row,
               std::size_t col = 0)
      : Error(kind, detail), row_(row), col_(col) {}

  /// 1-based line number for text inputs, 0-based row for matrices.
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

// Lowercases ASCII letters and trims surrounding whitespace. Bytes >= 0x80 are
// left untouched so UTF-8 sequences survive.
inline std::string normalize_word(std::string_view word) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t begin = 0;
  std::size_t end = word.size();
  while (begin < end && is_space(static_cast<unsigned char>(word[begin]))) ++begin;
  while (end > begin && is_space(static_cast<unsigned char>(word[end - 1]))) --end;
  std::string out(word.substr(begin, end - begin));
  for (auto& c : out) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(std::tolower(u));
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

/// Parses a whole string as a finite decimal; nullopt-style failure via bool.
inline bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

/// Shortest round-trippable decimal for a double.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, ptr);
}

/// Dense row-major matrix. Rows are instances throughout the engine.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorKind::DimensionMismatch, "matrix payload does not match shape");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  /// New matrix holding the given rows, in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] >= rows_) throw Error(ErrorKind::OutOfRange, "row index out of range");
      std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(indices[i] * cols_), cols_,
                  out.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    }
    return out;
  }

  const std::vector<T>& data() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Index of the largest element; ties go to the lowest index.
template <typename Range>
std::size_t argmax(const Range& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace kpt
