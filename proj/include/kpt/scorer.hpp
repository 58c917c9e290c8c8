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

// Masked-position scores: templates, datasets, the KPTS score-matrix format,
// piece-to-word aggregation and a seeded synthetic scorer.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "kpt/common.hpp"
#include "kpt/kbstore.hpp"

namespace kpt {

inline constexpr std::string_view kMaskToken = "[MASK]";

struct Template {
  std::string template_id;
  std::string pattern;
};

struct Instance {
  std::string guid;
  std::string text_a;
  std::optional<std::string> text_b;
  std::optional<int> label;
};

struct ManifestWord {
  std::string surface;
  int piece_count = 1;

  bool operator==(const ManifestWord&) const = default;
};

/// Column layout of a score matrix: word i occupies `piece_count` adjacent
/// columns starting at `column_offset(i)`.
struct ScoreManifest {
  std::string dataset_id;
  std::string template_id;
  std::size_t n_instances = 0;
  std::vector<ManifestWord> words;

  std::size_t total_pieces() const {
    std::size_t n = 0;
    for (const auto& w : words) n += static_cast<std::size_t>(w.piece_count);
    return n;
  }

  std::size_t column_offset(std::size_t word_index) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < word_index; ++i) n += static_cast<std::size_t>(words[i].piece_count);
    return n;
  }

  std::optional<std::size_t> find(const std::string& surface) const {
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (words[i].surface == surface) return i;
    }
    return std::nullopt;
  }

  bool operator==(const ScoreManifest&) const = default;
};

/// Piece probabilities, one row per instance. Values lie in (0, 1].
struct ScoreMatrix {
  ScoreManifest manifest;
  Matrix<float> values;
};

/// Per-word scores in the flattened order of the verbalizer they were bound to.
using WordScoreMatrix = Matrix<double>;

namespace scorer {

// ---------------------------------------------------------------------------
// Templates

inline void validate_template(const Template& t) {
  std::size_t masks = 0;
  for (auto pos = t.pattern.find(kMaskToken); pos != std::string::npos;
       pos = t.pattern.find(kMaskToken, pos + kMaskToken.size())) {
    ++masks;
  }
  if (masks != 1) {
    throw Error(ErrorKind::InvalidTemplate,
                t.template_id + ": expected exactly one [MASK], found " + std::to_string(masks));
  }
  if (t.pattern.find("{a}") == std::string::npos && t.pattern.find("{a~}") == std::string::npos &&
      t.pattern.find("{b}") == std::string::npos) {
    throw Error(ErrorKind::InvalidTemplate, t.template_id + ": no input slot");
  }
}

/// Text with a single trailing punctuation mark removed (title form used by
/// the `{a~}` slot).
inline std::string strip_trailing_punct(std::string_view s) {
  s = trim(s);
  if (!s.empty() && std::ispunct(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(trim(s));
}

/// Substitutes `{a}`, `{a~}` and `{b}` in one left-to-right pass, so slot-like
/// text inside the inputs is never expanded.
inline std::string wrap(const Template& t, const Instance& x) {
  validate_template(t);
  std::string out;
  out.reserve(t.pattern.size() + x.text_a.size() + (x.text_b ? x.text_b->size() : 0));
  const std::string& p = t.pattern;
  for (std::size_t i = 0; i < p.size();) {
    if (p.compare(i, 3, "{a}") == 0) {
      out += x.text_a;
      i += 3;
    } else if (p.compare(i, 4, "{a~}") == 0) {
      out += strip_trailing_punct(x.text_a);
      i += 4;
    } else if (p.compare(i, 3, "{b}") == 0) {
      if (!x.text_b) {
        throw Error(ErrorKind::MissingSlot, t.template_id + " needs text_b for instance " + x.guid);
      }
      out += *x.text_b;
      i += 3;
    } else {
      out += p[i++];
    }
  }
  return out;
}

/// Manual templates for the five benchmark datasets, four per dataset.
inline std::vector<Template> default_templates() {
  return {
      {"agnews_1", "A [MASK] news : {a}"},
      {"agnews_2", "{a} This topic is about [MASK]."},
      {"agnews_3", "[ Category : [MASK] ] {a}"},
      {"agnews_4", "[ Topic : [MASK] ] {a}"},
      {"dbpedia_1", "{a} {b} {a~} is a [MASK] ."},
      {"dbpedia_2", "{a} {b} In this sentence, {a~} is a [MASK] ."},
      {"dbpedia_3", "{a} {b} The type of {a~} is [MASK] ."},
      {"dbpedia_4", "{a} {b} The category of {a~} is [MASK] ."},
      {"yahoo_1", "A [MASK] question : {a}"},
      {"yahoo_2", "{a} This topic is about [MASK]."},
      {"yahoo_3", "[ Category : [MASK] ] {a}"},
      {"yahoo_4", "[ Topic : [MASK] ] {a}"},
      {"imdb_1", "It was [MASK] . {a}"},
      {"imdb_2", "Just [MASK] ! {a}"},
      {"imdb_3", "{a} All in all, it was [MASK] ."},
      {"imdb_4", "{a} In summary, the film was [MASK] ."},
      {"amazon_1", "It was [MASK] . {a}"},
      {"amazon_2", "Just [MASK] ! {a}"},
      {"amazon_3", "{a} All in all, it was [MASK] ."},
      {"amazon_4", "{a} In summary, it was [MASK] ."},
  };
}

inline std::vector<Template> parse_template_registry(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidTemplate, "template registry must be an array");
  std::vector<Template> out;
  for (const auto& item : j) {
    try {
      Template t{item.at("template_id").get<std::string>(), item.at("pattern").get<std::string>()};
      validate_template(t);
      out.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::InvalidTemplate, e.what());
    }
  }
  return out;
}

inline nlohmann::json template_registry_json(const std::vector<Template>& templates) {
  auto j = nlohmann::json::array();
  for (const auto& t : templates) j.push_back({{"template_id", t.template_id}, {"pattern", t.pattern}});
  return j;
}

inline std::vector<Template> load_template_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidTemplate, path + ": " + e.what());
  }
  return parse_template_registry(j);
}

// ---------------------------------------------------------------------------
// Datasets (JSON Lines)

inline Instance parse_instance(const nlohmann::json& j, std::size_t line_no,
                               std::optional<std::size_t> num_classes) {
  auto fail = [&](const std::string& why) {
    return LocatedError(ErrorKind::MalformedLine, "dataset line " + std::to_string(line_no) + ": " + why,
                        line_no);
  };
  if (!j.is_object()) throw fail("not an object");
  Instance x;
  try {
    const auto& guid = j.at("guid");
    x.guid = guid.is_string() ? guid.get<std::string>() : guid.dump();
    x.text_a = j.at("text_a").get<std::string>();
    if (j.contains("text_b") && !j["text_b"].is_null()) x.text_b = j["text_b"].get<std::string>();
    if (j.contains("label") && !j["label"].is_null()) x.label = j["label"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
  if (x.text_a.empty()) throw fail("empty text_a");
  if (x.label && (*x.label < 0 || (num_classes && static_cast<std::size_t>(*x.label) >= *num_classes))) {
    throw fail("label out of range");
  }
  return x;
}

inline std::vector<Instance> parse_dataset(std::istream& in,
                                           std::optional<std::size_t> num_classes = std::nullopt) {
  std::vector<Instance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw LocatedError(ErrorKind::MalformedLine, "dataset line " + std::to_string(line_no) + ": " + e.what(),
                         line_no);
    }
    out.push_back(parse_instance(j, line_no, num_classes));
  }
  return out;
}

inline std::vector<Instance> load_dataset(const std::string& path,
                                          std::optional<std::size_t> num_classes = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return parse_dataset(in, num_classes);
}

inline nlohmann::json instance_json(const Instance& x) {
  nlohmann::json j{{"guid", x.guid}, {"text_a", x.text_a}};
  if (x.text_b) j["text_b"] = *x.text_b;
  if (x.label) j["label"] = *x.label;
  return j;
}

// ---------------------------------------------------------------------------
// Manifest JSON

inline nlohmann::json manifest_json(const ScoreManifest& m) {
  auto words = nlohmann::json::array();
  for (const auto& w : m.words) words.push_back({{"surface", w.surface}, {"piece_count", w.piece_count}});
  return {{"format_version", 1},
          {"dataset_id", m.dataset_id},
          {"template_id", m.template_id},
          {"n_instances", m.n_instances},
          {"words", words}};
}

inline ScoreManifest parse_manifest(const nlohmann::json& j) {
  ScoreManifest m;
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw Error(ErrorKind::VersionMismatch, "manifest format_version must be 1");
    }
    m.dataset_id = j.at("dataset_id").get<std::string>();
    m.template_id = j.at("template_id").get<std::string>();
    m.n_instances = j.at("n_instances").get<std::size_t>();
    std::map<std::string, int> seen;
    for (const auto& w : j.at("words")) {
      ManifestWord mw{w.at("surface").get<std::string>(), w.at("piece_count").get<int>()};
      if (mw.piece_count < 1) {
        throw Error(ErrorKind::InvalidArgument, "piece_count < 1 for '" + mw.surface + "'");
      }
      if (seen[mw.surface]++) throw Error(ErrorKind::InvalidArgument, "duplicate word '" + mw.surface + "'");
      m.words.push_back(std::move(mw));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("manifest: ") + e.what());
  }
  return m;
}

inline ScoreManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
  return parse_manifest(j);
}

inline void save_manifest(const ScoreManifest& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << manifest_json(m).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// KPTS binary matrix: "KPTS", u32 version, u64 rows, u64 cols, f32 payload,
// all little-endian, row-major.

inline constexpr std::array<char, 4> kMatrixMagic{'K', 'P', 'T', 'S'};
inline constexpr std::uint32_t kMatrixVersion = 1;
inline constexpr std::size_t kMatrixHeaderBytes = 4 + 4 + 8 + 8;

namespace detail {

template <typename U>
void put_le(std::string& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <typename U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline std::string encode_matrix(const Matrix<float>& m) {
  std::string out;
  out.reserve(kMatrixHeaderBytes + m.data().size() * 4);
  out.append(kMatrixMagic.data(), kMatrixMagic.size());
  detail::put_le<std::uint32_t>(out, kMatrixVersion);
  detail::put_le<std::uint64_t>(out, m.rows());
  detail::put_le<std::uint64_t>(out, m.cols());
  for (float v : m.data()) detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

/// Decodes and range-checks a KPTS payload. Values must be in (0, 1].
inline Matrix<float> decode_matrix(std::string_view bytes) {
  if (bytes.size() < kMatrixHeaderBytes) throw Error(ErrorKind::TruncatedPayload, "header too short");
  if (std::memcmp(bytes.data(), kMatrixMagic.data(), 4) != 0) throw Error(ErrorKind::BadMagic, "expected KPTS");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  auto version = detail::get_le<std::uint32_t>(p + 4);
  if (version != kMatrixVersion) {
    throw Error(ErrorKind::VersionMismatch, "matrix version " + std::to_string(version));
  }
  auto rows = detail::get_le<std::uint64_t>(p + 8);
  auto cols = detail::get_le<std::uint64_t>(p + 16);
  const std::size_t available = (bytes.size() - kMatrixHeaderBytes) / 4;
  if (cols != 0 && rows > available / cols) {
    throw Error(ErrorKind::TruncatedPayload, "expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                                                 " floats, file holds " + std::to_string(available));
  }
  const std::size_t count = static_cast<std::size_t>(rows * cols);
  if (bytes.size() != kMatrixHeaderBytes + count * 4) {
    if (bytes.size() < kMatrixHeaderBytes + count * 4) {
      throw Error(ErrorKind::TruncatedPayload, "payload shorter than header dimensions");
    }
    throw Error(ErrorKind::TrailingData, "bytes after payload");
  }
  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto bits = detail::get_le<std::uint32_t>(p + kMatrixHeaderBytes + 4 * i);
    float v = std::bit_cast<float>(bits);
    if (!(v > 0.0f && v <= 1.0f)) {
      throw LocatedError(ErrorKind::OutOfRange,
                         "value at (" + std::to_string(i / cols) + "," + std::to_string(i % cols) + ")",
                         i / cols, i % cols);
    }
    data[i] = v;
  }
  return Matrix<float>(rows, cols, std::move(data));
}

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void save_matrix(const Matrix<float>& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  auto bytes = encode_matrix(m);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline ScoreMatrix make_score_matrix(ScoreManifest manifest, Matrix<float> values) {
  if (values.rows() != manifest.n_instances || values.cols() != manifest.total_pieces()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix is " + std::to_string(values.rows()) + "x" + std::to_string(values.cols()) +
                    ", manifest expects " + std::to_string(manifest.n_instances) + "x" +
                    std::to_string(manifest.total_pieces()));
  }
  return {std::move(manifest), std::move(values)};
}

inline ScoreMatrix load_score_matrix(const std::string& manifest_path, const std::string& matrix_path) {
  auto manifest = load_manifest(manifest_path);
  auto values = decode_matrix(read_file_bytes(matrix_path));
  return make_score_matrix(std::move(manifest), std::move(values));
}

inline void save_score_matrix(const ScoreMatrix& s, const std::string& manifest_path,
                              const std::string& matrix_path) {
  save_manifest(s.manifest, manifest_path);
  save_matrix(s.values, matrix_path);
}

/// Rows of a score matrix as a new matrix (e.g. a support set).
inline ScoreMatrix select_instances(const ScoreMatrix& s, std::span<const std::size_t> rows) {
  ScoreMatrix out{s.manifest, s.values.select_rows(rows)};
  out.manifest.n_instances = rows.size();
  return out;
}

// ---------------------------------------------------------------------------
// Piece -> word aggregation

/// Verbalizer with piece counts taken from the manifest.
inline Verbalizer bind(const Verbalizer& v, const ScoreManifest& manifest) {
  std::unordered_map<std::string, int> counts;
  for (const auto& w : manifest.words) counts.emplace(w.surface, w.piece_count);
  std::vector<int> pieces;
  for (const auto& w : v.flat_words()) {
    auto it = counts.find(w.surface);
    if (it == counts.end()) throw Error(ErrorKind::MissingWord, w.surface);
    pieces.push_back(it->second);
  }
  return v.with_piece_counts(pieces);
}

/// Mean of each word's piece columns, in the verbalizer's flattened order.
inline WordScoreMatrix word_scores(const ScoreMatrix& s, const Verbalizer& v) {
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> columns;
  std::size_t offset = 0;
  for (const auto& w : s.manifest.words) {
    columns.emplace(w.surface, std::pair{offset, static_cast<std::size_t>(w.piece_count)});
    offset += static_cast<std::size_t>(w.piece_count);
  }
  const auto words = v.flat_words();
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.reserve(words.size());
  for (const auto& w : words) {
    auto it = columns.find(w.surface);
    if (it == columns.end()) throw Error(ErrorKind::MissingWord, w.surface);
    spans.push_back(it->second);
  }
  WordScoreMatrix out(s.values.rows(), words.size());
  for (std::size_t r = 0; r < s.values.rows(); ++r) {
    auto row = s.values.row(r);
    for (std::size_t j = 0; j < spans.size(); ++j) {
      auto [start, count] = spans[j];
      double sum = 0.0;
      for (std::size_t k = 0; k < count; ++k) sum += static_cast<double>(row[start + k]);
      out(r, j) = sum / static_cast<double>(count);
    }
  }
  return out;
}

struct SingleTokenResult {
  Verbalizer verbalizer;
  /// Classes whose name spans several pieces but was kept anyway.
  std::vector<std::size_t> multi_piece_names;
};

/// Keeps only words that map to one tokenizer piece. A multi-piece class name
/// survives (and is flagged) when its class keeps at least one single-piece
/// word; a class with no single-piece word at all is an error.
inline SingleTokenResult restrict_single_token(const Verbalizer& v, const ScoreManifest& manifest) {
  auto bound = bind(v, manifest);
  SingleTokenResult result;
  std::vector<bool> keep;
  for (std::size_t y = 0; y < bound.num_classes(); ++y) {
    const auto& ws = bound.words(y);
    std::size_t single = 0;
    for (const auto& w : ws) single += w.piece_count == 1 ? 1 : 0;
    if (single == 0) throw Error(ErrorKind::EmptyClassAfterFilter, bound.class_spec(y).class_name);
    if (ws.front().piece_count != 1) result.multi_piece_names.push_back(y);
    for (std::size_t i = 0; i < ws.size(); ++i) keep.push_back(i == 0 || ws[i].piece_count == 1);
  }
  result.verbalizer = bound.retain(keep);
  return result;
}

// ---------------------------------------------------------------------------
// Synthetic scorer

/// Planted-signal generator. For an instance of gold class y, word v gets the
/// unnormalized mass
///   skew_v * exp(noise * z + [affinity(v) == y] * signal_y),  z ~ N(0, 1)
/// and every row is divided by (sum of masses + background) so values land in
/// (0, 1]. Skew never changes the random draws, so two configs that differ
/// only in skew produce directly comparable rows.
struct SyntheticConfig {
  double signal = 2.0;
  /// Per-class override of `signal`; empty means uniform.
  std::vector<double> class_signal;
  /// Per-word prior multiplier in the verbalizer's flattened order; empty means 1.
  std::vector<double> word_skew;
  double noise = 0.5;
  /// Unnormalized mass of the rest of the vocabulary.
  double background = 0.0;
  /// True class of each flattened word (-1 = none); empty means the listed class.
  std::vector<int> word_affinity;
  /// Log-normal distortion of the context-free row relative to the true prior.
  double context_free_noise = 0.5;
  std::string dataset_id = "synthetic";
  std::string template_id = "synthetic";
};

struct SyntheticScores {
  ScoreMatrix matrix;
  std::vector<int> gold;
};

namespace detail {

struct SyntheticLayout {
  ScoreManifest manifest;
  std::vector<double> skew;      // per manifest word
  std::vector<int> affinity;     // per manifest word
};

inline SyntheticLayout synthetic_layout(const SyntheticConfig& cfg, const Verbalizer& v,
                                        std::size_t n_instances) {
  const auto words = v.flat_words();
  const auto classes = v.word_classes();
  if (!cfg.word_skew.empty() && cfg.word_skew.size() != words.size()) {
    throw Error(ErrorKind::LengthMismatch, "word_skew length must match verbalizer word count");
  }
  if (!cfg.word_affinity.empty() && cfg.word_affinity.size() != words.size()) {
    throw Error(ErrorKind::LengthMismatch, "word_affinity length must match verbalizer word count");
  }
  if (!cfg.class_signal.empty() && cfg.class_signal.size() != v.num_classes()) {
    throw Error(ErrorKind::LengthMismatch, "class_signal length must match class count");
  }
  SyntheticLayout layout;
  layout.manifest.dataset_id = cfg.dataset_id;
  layout.manifest.template_id = cfg.template_id;
  layout.manifest.n_instances = n_instances;
  std::unordered_map<std::string, bool> seen;
  for (std::size_t j = 0; j < words.size(); ++j) {
    if (seen[words[j].surface]) continue;  // first listing wins for shared words
    seen[words[j].surface] = true;
    layout.manifest.words.push_back({words[j].surface, words[j].piece_count});
    double skew = cfg.word_skew.empty() ? 1.0 : cfg.word_skew[j];
    if (!(skew > 0.0)) throw Error(ErrorKind::InvalidArgument, "word_skew entries must be > 0");
    layout.skew.push_back(skew);
    layout.affinity.push_back(cfg.word_affinity.empty() ? static_cast<int>(classes[j]) : cfg.word_affinity[j]);
  }
  return layout;
}

inline void write_row(const std::vector<double>& mass, double background, const ScoreManifest& m,
                      std::span<float> row) {
  double z = background;
  for (double x : mass) z += x;
  std::size_t col = 0;
  for (std::size_t j = 0; j < mass.size(); ++j) {
    double p = std::clamp(mass[j] / z, 1e-12, 1.0);
    for (int k = 0; k < m.words[j].piece_count; ++k) row[col++] = static_cast<float>(p);
  }
}

}  // namespace detail

/// Deterministic given `seed`. Gold labels are drawn uniformly.
inline SyntheticScores synthetic_scores(const SyntheticConfig& cfg, std::size_t n_instances,
                                        const Verbalizer& v, std::uint64_t seed) {
  auto layout = detail::synthetic_layout(cfg, v, n_instances);
  const std::size_t n_classes = v.num_classes();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_label(0, static_cast<int>(n_classes) - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SyntheticScores out;
  out.matrix.values = Matrix<float>(n_instances, layout.manifest.total_pieces());
  out.gold.resize(n_instances);
  std::vector<double> mass(layout.manifest.words.size());
  for (std::size_t r = 0; r < n_instances; ++r) {
    const int y = pick_label(rng);
    out.gold[r] = y;
    const double boost = cfg.class_signal.empty() ? cfg.signal : cfg.class_signal[static_cast<std::size_t>(y)];
    for (std::size_t j = 0; j < mass.size(); ++j) {
      double logit = cfg.noise * gauss(rng) + (layout.affinity[j] == y ? boost : 0.0);
      mass[j] = layout.skew[j] * std::exp(logit);
    }
    detail::write_row(mass, cfg.background, layout.manifest, out.matrix.values.row(r));
  }
  out.matrix.manifest = std::move(layout.manifest);
  return out;
}

/// One-row matrix standing in for the empty-input (context-free) prior:
/// skew only, distorted by `context_free_noise`.
inline ScoreMatrix synthetic_context_free(const SyntheticConfig& cfg, const Verbalizer& v,
                                          std::uint64_t seed) {
  auto layout = detail::synthetic_layout(cfg, v, 1);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> mass(layout.manifest.words.size());
  for (std::size_t j = 0; j < mass.size(); ++j) {
    mass[j] = layout.skew[j] * std::exp(cfg.context_free_noise * gauss(rng));
  }
  ScoreMatrix out;
  out.values = Matrix<float>(1, layout.manifest.total_pieces());
  detail::write_row(mass, cfg.background, layout.manifest, out.values.row(0));
  out.manifest = std::move(layout.manifest);
  return out;
}

}  // namespace scorer
}  // namespace kpt
