// Copyright 2026 The ldprepr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>

#include "ldprepr/error.hpp"
#include "ldprepr/pipeline.hpp"

namespace ldprepr {
namespace {

[[noreturn]] void ParseFail(std::string_view source, std::size_t line,
                            const std::string& what) {
  Fail(ErrorCode::kParse, std::string(source) + ":" + std::to_string(line) +
                              ": " + what);
}

std::size_t ParseCount(std::string_view text, std::string_view source,
                       std::size_t line, std::string_view what) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    ParseFail(source, line,
              "expected an integer for " + std::string(what) + ", got '" +
                  std::string(text) + "'");
  }
  return value;
}

// Parses "#<tag> <k1>=<v1> <k2>=<v2>" and returns the two counts.
std::pair<std::size_t, std::size_t> ParseHeader(std::string_view line,
                                                std::string_view tag,
                                                std::string_view first_key,
                                                std::string_view source) {
  std::istringstream fields{std::string(line)};
  std::string word;
  fields >> word;
  if (word != "#" + std::string(tag)) {
    ParseFail(source, 1,
              "expected header '#" + std::string(tag) + " " +
                  std::string(first_key) + "=<n> classes=<C>'");
  }
  std::optional<std::size_t> first;
  std::optional<std::size_t> classes;
  while (fields >> word) {
    const std::size_t eq = word.find('=');
    if (eq == std::string::npos) {
      ParseFail(source, 1, "malformed header field '" + word + "'");
    }
    const std::string_view key = std::string_view(word).substr(0, eq);
    const std::string_view value = std::string_view(word).substr(eq + 1);
    if (key == first_key) {
      first = ParseCount(value, source, 1, key);
    } else if (key == "classes") {
      classes = ParseCount(value, source, 1, key);
    } else {
      ParseFail(source, 1, "unknown header field '" + std::string(key) + "'");
    }
  }
  if (!first || !classes || *first == 0 || *classes == 0) {
    ParseFail(source, 1,
              "header needs positive " + std::string(first_key) +
                  "= and classes= fields");
  }
  return {*first, *classes};
}

int ParseLabel(std::string_view text, std::size_t classes,
               std::string_view source, std::size_t line) {
  const std::size_t label = ParseCount(text, source, line, "label");
  if (label >= classes) {
    ParseFail(source, line,
              "label " + std::to_string(label) + " outside [0, " +
                  std::to_string(classes) + ")");
  }
  return static_cast<int>(label);
}

// Yields (line number, content) for each non-blank line after the header,
// with a trailing '\r' removed.
template <typename RowFn>
void ForEachRow(std::istream& in, RowFn on_row) {
  std::string line;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    on_row(number, std::string_view(line));
  }
}

std::string ReadHeaderLine(std::istream& in, std::string_view source) {
  std::string header;
  if (!std::getline(in, header)) ParseFail(source, 1, "file is empty");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  return header;
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return out;
}

void FinishOutput(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) Fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) Fail(ErrorCode::kInvalidValue, "cannot format value");
  return std::string(buffer, ptr);
}

EmbeddingDataset ParseEmbeddings(std::istream& in, std::string_view source) {
  EmbeddingDataset data;
  std::tie(data.dim, data.classes) =
      ParseHeader(ReadHeaderLine(in, source), "emb", "dim", source);

  ForEachRow(in, [&](std::size_t number, std::string_view line) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      ParseFail(source, number, "expected '<label>\\t<values>'");
    }
    EmbeddingVector vec;
    vec.label = ParseLabel(line.substr(0, tab), data.classes, source, number);
    vec.values.reserve(data.dim);
    std::string_view rest = line.substr(tab + 1);
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view token = rest.substr(0, comma);
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size() ||
          token.empty()) {
        ParseFail(source, number,
                  "malformed value '" + std::string(token) + "'");
      }
      if (!std::isfinite(value)) {
        ParseFail(source, number, "non-finite value");
      }
      vec.values.push_back(value);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (vec.values.size() != data.dim) {
      ParseFail(source, number,
                "expected " + std::to_string(data.dim) + " values, found " +
                    std::to_string(vec.values.size()));
    }
    data.records.push_back(std::move(vec));
  });
  if (data.records.empty()) ParseFail(source, 1, "file has no records");
  return data;
}

EmbeddingDataset LoadEmbeddings(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ParseEmbeddings(in, path);
}

void WriteEmbeddings(std::ostream& out, const EmbeddingDataset& data) {
  out << "#emb dim=" << data.dim << " classes=" << data.classes << '\n';
  for (const EmbeddingVector& vec : data.records) {
    out << vec.label << '\t';
    for (std::size_t i = 0; i < vec.values.size(); ++i) {
      if (i != 0) out << ',';
      out << FormatDouble(vec.values[i]);
    }
    out << '\n';
  }
}

void SaveEmbeddings(const std::string& path, const EmbeddingDataset& data) {
  std::ofstream out = OpenOutput(path);
  WriteEmbeddings(out, data);
  FinishOutput(out, path);
}

BitDataset ParseBits(std::istream& in, std::string_view source) {
  BitDataset data;
  std::tie(data.length, data.classes) =
      ParseHeader(ReadHeaderLine(in, source), "bits", "len", source);

  ForEachRow(in, [&](std::size_t number, std::string_view line) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      ParseFail(source, number, "expected '<label>\\t<bits>'");
    }
    BitVector vec;
    vec.label = ParseLabel(line.substr(0, tab), data.classes, source, number);
    const std::string_view text = line.substr(tab + 1);
    if (text.size() != data.length) {
      ParseFail(source, number,
                "expected " + std::to_string(data.length) + " bits, found " +
                    std::to_string(text.size()));
    }
    try {
      vec.bits = PackedBits::FromString(text);
    } catch (const Error& e) {
      ParseFail(source, number, e.what());
    }
    data.records.push_back(std::move(vec));
  });
  if (data.records.empty()) ParseFail(source, 1, "file has no records");
  return data;
}

BitDataset LoadBits(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return ParseBits(in, path);
}

void WriteBits(std::ostream& out, const BitDataset& data) {
  out << "#bits len=" << data.length << " classes=" << data.classes << '\n';
  for (const BitVector& vec : data.records) {
    out << vec.label << '\t' << vec.bits.to_string() << '\n';
  }
}

void SaveBits(const std::string& path, const BitDataset& data) {
  std::ofstream out = OpenOutput(path);
  WriteBits(out, data);
  FinishOutput(out, path);
}

}  // namespace ldprepr
