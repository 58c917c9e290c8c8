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

// Run configuration: a flat `key = value` file (TOML subset) whose keys the
// command-line flags mirror one to one.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kpt/common.hpp"
#include "kpt/refine.hpp"

namespace kpt {

struct PipelineConfig {
  // paths
  std::string dataset;           // evaluation JSONL
  std::string scores_dir;        // <template_id>.manifest.json / .kpts per template
  std::string train_dataset;     // labeled pool for few-shot runs and support sampling
  std::string train_scores_dir;
  std::string templates;         // registry JSON; empty = built-in defaults
  std::vector<std::string> template_ids;
  std::string verbalizer;
  std::string classes;
  std::string kb;
  std::string lexicon_pos;
  std::string lexicon_neg;
  std::string output_dir = "out";

  // variant flags
  bool enable_fr = true;
  bool enable_rr = true;
  bool enable_cc = true;
  bool enable_lr = true;
  bool single_token = false;
  std::string variant;  // empty = derived from the flags

  double eta = 0.0;
  std::size_t support_size = 200;
  int shot = 0;
  std::vector<std::uint64_t> seeds{1};
  double C = refine::kDefaultC;
  double epsilon = refine::kDefaultEpsilon;
  double learning_rate = 0.05;
  int epochs = 5;
  std::size_t batch_size = 0;
  std::vector<std::size_t> sizes{0, 10, 50, 100, 200};
  std::size_t threads = 0;  // 0 = hardware concurrency
};

namespace config {

using KeyValues = std::map<std::string, std::string>;

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "dataset",     "scores_dir",   "train_dataset", "train_scores_dir", "templates", "template_ids",
      "verbalizer",  "classes",      "kb",            "lexicon_pos",      "lexicon_neg", "output_dir",
      "enable_fr",   "enable_rr",    "enable_cc",     "enable_lr",        "single_token", "variant",
      "eta",         "support_size", "shot",          "seeds",            "C",          "epsilon",
      "learning_rate", "epochs",     "batch_size",    "sizes",            "threads"};
  return keys;
}

inline std::string unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

/// `key = value` per line; `#` starts a comment outside quotes; `[section]`
/// headers are accepted and ignored. Unknown keys are an error.
inline KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    auto body = trim(line);
    if (body.empty() || body.front() == '[') continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw LocatedError(ErrorKind::MalformedLine, "config line " + std::to_string(line_no), line_no);
    }
    std::string key(trim(body.substr(0, eq)));
    if (!known_keys().count(key)) {
      throw LocatedError(ErrorKind::MalformedLine, "unknown config key '" + key + "'", line_no);
    }
    kv[key] = unquote(body.substr(eq + 1));
  }
  return kv;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorKind::InvalidArgument, key + ": expected true/false, got '" + v + "'");
}

inline double parse_real(const std::string& key, const std::string& v) {
  double x = 0.0;
  if (!parse_double(v, x)) throw Error(ErrorKind::InvalidArgument, key + ": expected a number, got '" + v + "'");
  return x;
}

inline long long parse_integer(const std::string& key, const std::string& v) {
  auto t = trim(v);
  long long x = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw Error(ErrorKind::InvalidArgument, key + ": expected an integer, got '" + v + "'");
  }
  return x;
}

inline std::vector<std::string> parse_list(std::string_view v) {
  v = trim(v);
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  for (auto item : split(v, ',')) out.push_back(unquote(item));
  return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  auto x = parse_integer(key, v);
  if (x < 0) throw Error(ErrorKind::InvalidArgument, key + " must be >= 0");
  return static_cast<std::size_t>(x);
}

/// Builds a config from key/values. Relative paths resolve against `base_dir`.
inline PipelineConfig from_key_values(const KeyValues& kv, const std::filesystem::path& base_dir = {}) {
  PipelineConfig c;
  auto path = [&](const std::string& v) {
    if (v.empty()) return v;
    std::filesystem::path p(v);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return p.lexically_normal().string();
  };
  for (const auto& [key, value] : kv) {
    if (key == "dataset") c.dataset = path(value);
    else if (key == "scores_dir") c.scores_dir = path(value);
    else if (key == "train_dataset") c.train_dataset = path(value);
    else if (key == "train_scores_dir") c.train_scores_dir = path(value);
    else if (key == "templates") c.templates = path(value);
    else if (key == "template_ids") c.template_ids = parse_list(value);
    else if (key == "verbalizer") c.verbalizer = path(value);
    else if (key == "classes") c.classes = path(value);
    else if (key == "kb") c.kb = path(value);
    else if (key == "lexicon_pos") c.lexicon_pos = path(value);
    else if (key == "lexicon_neg") c.lexicon_neg = path(value);
    else if (key == "output_dir") c.output_dir = path(value);
    else if (key == "enable_fr") c.enable_fr = parse_bool(key, value);
    else if (key == "enable_rr") c.enable_rr = parse_bool(key, value);
    else if (key == "enable_cc") c.enable_cc = parse_bool(key, value);
    else if (key == "enable_lr") c.enable_lr = parse_bool(key, value);
    else if (key == "single_token") c.single_token = parse_bool(key, value);
    else if (key == "variant") c.variant = value;
    else if (key == "eta") c.eta = parse_real(key, value);
    else if (key == "support_size") c.support_size = parse_count(key, value);
    else if (key == "shot") {
      auto s = parse_integer(key, value);
      if (s < 0) throw Error(ErrorKind::InvalidArgument, "shot must be >= 0");
      c.shot = static_cast<int>(s);
    } else if (key == "seeds") {
      c.seeds.clear();
      for (const auto& s : parse_list(value)) c.seeds.push_back(static_cast<std::uint64_t>(parse_count(key, s)));
      if (c.seeds.empty()) throw Error(ErrorKind::InvalidArgument, "seeds must not be empty");
    } else if (key == "C") {
      c.C = parse_real(key, value);
      if (!(c.C > 0.0)) throw Error(ErrorKind::InvalidArgument, "C must be > 0");
    } else if (key == "epsilon") {
      c.epsilon = parse_real(key, value);
      if (!(c.epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be > 0");
    } else if (key == "learning_rate") {
      c.learning_rate = parse_real(key, value);
      if (!(c.learning_rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "learning_rate must be > 0");
    } else if (key == "epochs") {
      auto e = parse_integer(key, value);
      if (e < 1) throw Error(ErrorKind::InvalidArgument, "epochs must be >= 1");
      c.epochs = static_cast<int>(e);
    } else if (key == "batch_size") c.batch_size = parse_count(key, value);
    else if (key == "sizes") {
      c.sizes.clear();
      for (const auto& s : parse_list(value)) {
        auto x = parse_integer(key, s);
        if (x < 0) throw Error(ErrorKind::InvalidArgument, "sweep sizes must be >= 0");
        c.sizes.push_back(static_cast<std::size_t>(x));
      }
    } else if (key == "threads") c.threads = parse_count(key, value);
  }
  return c;
}

inline KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return parse_key_values(in);
}

}  // namespace config
}  // namespace kpt
