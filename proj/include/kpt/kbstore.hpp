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

// Knowledge sources (relatedness graph, sentiment lexicons) and construction
// of the initial label-word sets.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpt/common.hpp"

namespace kpt {

enum class KnowledgeKind { Graph, Lexicon };

struct ClassSpec {
  int label_id = 0;
  std::string class_name;
  KnowledgeKind source = KnowledgeKind::Graph;
};

struct LabelWord {
  std::string surface;
  int piece_count = 1;

  bool operator==(const LabelWord&) const = default;
};

/// Label words per class plus optional per-word weights. The first word of
/// every class is the class name; refinement never removes it.
class Verbalizer {
 public:
  Verbalizer() = default;

  Verbalizer(std::vector<ClassSpec> classes, std::vector<std::vector<LabelWord>> words)
      : classes_(std::move(classes)), words_(std::move(words)) {
    validate();
  }

  std::size_t num_classes() const noexcept { return classes_.size(); }
  const std::vector<ClassSpec>& classes() const noexcept { return classes_; }
  const ClassSpec& class_spec(std::size_t y) const { return classes_.at(y); }

  const std::vector<LabelWord>& words(std::size_t y) const { return words_.at(y); }
  const std::vector<std::vector<LabelWord>>& all_words() const noexcept { return words_; }

  std::size_t total_words() const noexcept {
    std::size_t n = 0;
    for (const auto& w : words_) n += w.size();
    return n;
  }

  /// Offset of class y's first word in the flattened (class-major) order.
  std::size_t offset(std::size_t y) const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < y; ++c) n += words_[c].size();
    return n;
  }

  /// Class index of every flattened word.
  std::vector<std::size_t> word_classes() const {
    std::vector<std::size_t> out;
    out.reserve(total_words());
    for (std::size_t y = 0; y < words_.size(); ++y) out.insert(out.end(), words_[y].size(), y);
    return out;
  }

  std::vector<LabelWord> flat_words() const {
    std::vector<LabelWord> out;
    for (const auto& cls : words_) out.insert(out.end(), cls.begin(), cls.end());
    return out;
  }

  const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }

  void set_weights(std::vector<double> w) {
    if (w.size() != total_words()) {
      throw Error(ErrorKind::LengthMismatch, "weight vector length " + std::to_string(w.size()) +
                                                 " != word count " + std::to_string(total_words()));
    }
    weights_ = std::move(w);
  }
  void clear_weights() { weights_.reset(); }

  /// Keeps the flattened words whose mask entry is true; weights follow.
  /// Class names must be kept.
  Verbalizer retain(const std::vector<bool>& keep) const {
    if (keep.size() != total_words()) {
      throw Error(ErrorKind::LengthMismatch, "retain mask does not match word count");
    }
    std::vector<std::vector<LabelWord>> words(words_.size());
    std::vector<double> weights;
    std::size_t flat = 0;
    for (std::size_t y = 0; y < words_.size(); ++y) {
      for (std::size_t i = 0; i < words_[y].size(); ++i, ++flat) {
        if (i == 0 && !keep[flat]) {
          throw Error(ErrorKind::InvalidArgument, "class name '" + words_[y][0].surface +
                                                      "' cannot be removed");
        }
        if (!keep[flat]) continue;
        words[y].push_back(words_[y][i]);
        if (weights_) weights.push_back((*weights_)[flat]);
      }
    }
    Verbalizer out(classes_, std::move(words));
    if (weights_) out.weights_ = std::move(weights);
    return out;
  }

  /// Same word sets with piece counts replaced.
  Verbalizer with_piece_counts(const std::vector<int>& counts) const {
    if (counts.size() != total_words()) {
      throw Error(ErrorKind::LengthMismatch, "piece-count vector does not match word count");
    }
    Verbalizer out = *this;
    std::size_t flat = 0;
    for (auto& cls : out.words_) {
      for (auto& w : cls) {
        if (counts[flat] < 1) throw Error(ErrorKind::InvalidArgument, "piece_count must be >= 1");
        w.piece_count = counts[flat++];
      }
    }
    return out;
  }

  bool operator==(const Verbalizer& other) const {
    if (words_ != other.words_ || weights_ != other.weights_) return false;
    if (classes_.size() != other.classes_.size()) return false;
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      if (classes_[i].label_id != other.classes_[i].label_id ||
          classes_[i].class_name != other.classes_[i].class_name) {
        return false;
      }
    }
    return true;
  }

 private:
  void validate() const {
    if (classes_.size() != words_.size()) {
      throw Error(ErrorKind::InvalidClassSpec, "class count does not match word-list count");
    }
    for (std::size_t y = 0; y < classes_.size(); ++y) {
      const auto& spec = classes_[y];
      if (spec.label_id != static_cast<int>(y)) {
        throw Error(ErrorKind::InvalidClassSpec, "label ids must be contiguous from 0");
      }
      if (spec.class_name.empty()) throw Error(ErrorKind::InvalidClassSpec, "empty class name");
      const auto& ws = words_[y];
      if (ws.empty() || ws.front().surface != spec.class_name) {
        throw Error(ErrorKind::InvalidClassSpec,
                    "class '" + spec.class_name + "' must list its name first");
      }
      std::set<std::string> seen;
      for (const auto& w : ws) {
        if (w.piece_count < 1) throw Error(ErrorKind::InvalidArgument, "piece_count must be >= 1");
        if (!seen.insert(w.surface).second) {
          throw Error(ErrorKind::InvalidClassSpec,
                      "duplicate word '" + w.surface + "' in class '" + spec.class_name + "'");
        }
      }
    }
  }

  std::vector<ClassSpec> classes_;
  std::vector<std::vector<LabelWord>> words_;
  std::optional<std::vector<double>> weights_;
};

// ---------------------------------------------------------------------------
// Relatedness graph

struct Neighbor {
  std::string word;
  double score = 0.0;

  bool operator==(const Neighbor&) const = default;
};

/// Directed weighted word graph. Edge direction is preserved as given.
class KnowledgeGraph {
 public:
  void add_edge(const std::string& source, const std::string& target, double score) {
    auto& out = adjacency_[source];
    for (const auto& n : out) {
      if (n.word == target) {
        throw Error(ErrorKind::DuplicateEdge, source + " -> " + target);
      }
    }
    out.push_back({target, score});
    nodes_.insert(source);
    nodes_.insert(target);
    ++edge_count_;
  }

  bool contains(const std::string& word) const { return nodes_.count(word) != 0; }
  const std::set<std::string>& nodes() const noexcept { return nodes_; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::optional<double> edge(const std::string& source, const std::string& target) const {
    auto it = adjacency_.find(source);
    if (it == adjacency_.end()) return std::nullopt;
    for (const auto& n : it->second) {
      if (n.word == target) return n.score;
    }
    return std::nullopt;
  }

  const std::vector<Neighbor>& out_edges(const std::string& source) const {
    static const std::vector<Neighbor> kNone;
    auto it = adjacency_.find(source);
    return it == adjacency_.end() ? kNone : it->second;
  }

 private:
  std::map<std::string, std::vector<Neighbor>> adjacency_;
  std::set<std::string> nodes_;
  std::size_t edge_count_ = 0;
};

/// Label-word lists keyed by label id.
using Lexicon = std::map<int, std::vector<std::string>>;

namespace kb {

/// Reads `source<TAB>target<TAB>score` lines. Words are normalized.
inline KnowledgeGraph parse_relatedness_graph(std::istream& in) {
  KnowledgeGraph graph;
  std::string line;
  std::size_t line_no = 0;
  bool any_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    any_content = true;
    auto fields = split(line, '\t');
    double score = 0.0;
    if (fields.size() != 3 || !parse_double(fields[2], score)) {
      throw LocatedError(ErrorKind::MalformedLine, "line " + std::to_string(line_no), line_no);
    }
    auto source = normalize_word(fields[0]);
    auto target = normalize_word(fields[1]);
    if (source.empty() || target.empty()) {
      throw LocatedError(ErrorKind::MalformedLine, "line " + std::to_string(line_no), line_no);
    }
    if (graph.edge(source, target)) {
      throw LocatedError(ErrorKind::DuplicateEdge,
                         source + " -> " + target + " at line " + std::to_string(line_no), line_no);
    }
    graph.add_edge(source, target, score);
  }
  if (!any_content) throw Error(ErrorKind::EmptySource, "relatedness graph has no edges");
  return graph;
}

inline KnowledgeGraph load_relatedness_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return parse_relatedness_graph(in);
}

/// Out-neighbors of `anchor` scoring strictly above `eta`, best first, ties
/// broken lexicographically. The anchor never appears in its own list.
inline std::vector<Neighbor> neighborhood(const KnowledgeGraph& graph, const std::string& anchor,
                                          double eta) {
  std::vector<Neighbor> out;
  for (const auto& n : graph.out_edges(anchor)) {
    if (n.score > eta && n.word != anchor) out.push_back(n);
  }
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
  });
  return out;
}

/// One normalized word per non-blank line; repeats dropped, first kept.
inline std::vector<std::string> parse_word_list(std::istream& in) {
  std::vector<std::string> words;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    auto w = normalize_word(line);
    if (w.empty()) continue;
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

struct PolarityLabels {
  int negative = 0;
  int positive = 1;
};

inline Lexicon make_sentiment_lexicon(std::vector<std::string> positive,
                                      std::vector<std::string> negative,
                                      PolarityLabels labels = {}) {
  std::set<std::string> pos(positive.begin(), positive.end());
  for (const auto& w : negative) {
    if (pos.count(w)) throw Error(ErrorKind::ConflictingPolarity, w);
  }
  Lexicon lex;
  lex[labels.positive] = std::move(positive);
  lex[labels.negative] = std::move(negative);
  return lex;
}

inline Lexicon load_sentiment_lexicon(const std::string& positive_path,
                                      const std::string& negative_path,
                                      PolarityLabels labels = {}) {
  std::ifstream pos(positive_path);
  if (!pos) throw Error(ErrorKind::Io, "cannot open " + positive_path);
  std::ifstream neg(negative_path);
  if (!neg) throw Error(ErrorKind::Io, "cannot open " + negative_path);
  return make_sentiment_lexicon(parse_word_list(pos), parse_word_list(neg), labels);
}

/// Validates ids (contiguous, unique) and names; returns specs ordered by id.
inline std::vector<ClassSpec> normalize_class_specs(std::vector<ClassSpec> specs) {
  if (specs.empty()) throw Error(ErrorKind::InvalidClassSpec, "no classes given");
  std::sort(specs.begin(), specs.end(),
            [](const ClassSpec& a, const ClassSpec& b) { return a.label_id < b.label_id; });
  std::set<std::string> names;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].label_id != static_cast<int>(i)) {
      throw Error(ErrorKind::InvalidClassSpec, "label ids must be unique and contiguous from 0");
    }
    specs[i].class_name = normalize_word(specs[i].class_name);
    if (specs[i].class_name.empty()) throw Error(ErrorKind::InvalidClassSpec, "empty class name");
    if (!names.insert(specs[i].class_name).second) {
      throw Error(ErrorKind::AmbiguousClassName, specs[i].class_name);
    }
  }
  return specs;
}

/// The knowledge each class draws from; a class only needs the kind it names.
struct KnowledgeSources {
  const KnowledgeGraph* graph = nullptr;
  const Lexicon* lexicon = nullptr;
};

/// Class name first, then its expansion: graph neighbors above `eta` (best
/// first) or the lexicon list in file order.
inline Verbalizer construct_verbalizer(std::vector<ClassSpec> specs, const KnowledgeSources& sources,
                                       double eta = 0.0) {
  specs = normalize_class_specs(std::move(specs));
  std::vector<std::vector<LabelWord>> words(specs.size());
  for (std::size_t y = 0; y < specs.size(); ++y) {
    const auto& name = specs[y].class_name;
    auto& list = words[y];
    list.push_back({name, 1});
    std::set<std::string> seen{name};
    auto push = [&](const std::string& w) {
      if (w.find(',') != std::string::npos) return;  // not representable in the file format
      if (seen.insert(w).second) list.push_back({w, 1});
    };
    if (specs[y].source == KnowledgeKind::Graph) {
      if (!sources.graph) throw Error(ErrorKind::InvalidArgument, "class '" + name + "' needs a graph");
      for (const auto& n : neighborhood(*sources.graph, name, eta)) push(n.word);
    } else {
      if (!sources.lexicon) {
        throw Error(ErrorKind::InvalidArgument, "class '" + name + "' needs a lexicon");
      }
      auto it = sources.lexicon->find(specs[y].label_id);
      if (it != sources.lexicon->end()) {
        for (const auto& w : it->second) push(w);
      }
    }
  }
  return Verbalizer(std::move(specs), std::move(words));
}

// ---------------------------------------------------------------------------
// Files

inline KnowledgeKind parse_knowledge_kind(const std::string& s) {
  if (s == "graph") return KnowledgeKind::Graph;
  if (s == "lexicon") return KnowledgeKind::Lexicon;
  throw Error(ErrorKind::InvalidClassSpec, "unknown source '" + s + "'");
}

/// classes.json: [{"label_id": 0, "class_name": "politics", "source": "graph"}, ...]
inline std::vector<ClassSpec> parse_class_specs(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidClassSpec, "classes file must be a JSON array");
  std::vector<ClassSpec> specs;
  for (const auto& item : j) {
    try {
      ClassSpec spec;
      spec.label_id = item.at("label_id").get<int>();
      spec.class_name = item.at("class_name").get<std::string>();
      spec.source = parse_knowledge_kind(item.value("source", std::string("graph")));
      specs.push_back(std::move(spec));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::InvalidClassSpec, e.what());
    }
  }
  return normalize_class_specs(std::move(specs));
}

inline std::vector<ClassSpec> load_class_specs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidClassSpec, path + ": " + e.what());
  }
  return parse_class_specs(j);
}

/// Line i holds class i: `class_name,word2,word3,...`.
inline std::string format_verbalizer(const Verbalizer& v) {
  std::string out;
  for (std::size_t y = 0; y < v.num_classes(); ++y) {
    const auto& ws = v.words(y);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (i) out += ',';
      out += ws[i].surface;
    }
    out += '\n';
  }
  return out;
}

inline Verbalizer parse_verbalizer(std::istream& in) {
  std::vector<ClassSpec> specs;
  std::vector<std::vector<LabelWord>> words;
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> names;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<LabelWord> list;
    std::set<std::string> seen;
    for (auto field : split(line, ',')) {
      auto w = normalize_word(field);
      if (w.empty()) {
        throw LocatedError(ErrorKind::MalformedLine, "empty word at line " + std::to_string(line_no),
                           line_no);
      }
      if (seen.insert(w).second) list.push_back({w, 1});
    }
    const auto& name = list.front().surface;
    if (!names.insert(name).second) throw Error(ErrorKind::AmbiguousClassName, name);
    specs.push_back({static_cast<int>(specs.size()), name, KnowledgeKind::Graph});
    words.push_back(std::move(list));
  }
  if (specs.empty()) throw Error(ErrorKind::EmptySource, "verbalizer file has no classes");
  return Verbalizer(std::move(specs), std::move(words));
}

inline Verbalizer load_verbalizer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return parse_verbalizer(in);
}

inline void save_verbalizer(const Verbalizer& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << format_verbalizer(v);
}

/// Weight sidecar: one decimal per flattened word.
inline std::string format_weights(std::span<const double> w) {
  std::string out;
  for (double x : w) {
    out += format_double(x);
    out += '\n';
  }
  return out;
}

inline std::vector<double> parse_weights(std::istream& in) {
  std::vector<double> w;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    double x = 0.0;
    if (!parse_double(line, x)) {
      throw LocatedError(ErrorKind::MalformedLine, "line " + std::to_string(line_no), line_no);
    }
    w.push_back(x);
  }
  return w;
}

inline std::vector<double> load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return parse_weights(in);
}

inline void save_weights(std::span<const double> w, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << format_weights(w);
}

}  // namespace kb
}  // namespace kpt
