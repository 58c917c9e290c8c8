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

// Metrics and reporting across templates and seeds.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpt/common.hpp"
#include "kpt/kbstore.hpp"

namespace kpt {

struct RunResult {
  std::string template_id;
  std::uint64_t seed = 0;
  int shot = 0;
  std::string variant;
  double micro_f1 = 0.0;
};

struct EvalReport {
  std::string variant;
  int shot = 0;
  std::size_t runs = 0;
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation, 0 for a single run
  double best_template = 0.0;
  std::string best_template_id;
};

struct StageCounts {
  std::string stage;
  std::vector<std::size_t> per_class;

  std::size_t total() const {
    std::size_t n = 0;
    for (auto c : per_class) n += c;
    return n;
  }
};

namespace eval {

/// Micro-averaged F1 over all classes. Each wrong prediction is one false
/// positive (predicted class) and one false negative (gold class), so this
/// equals accuracy for single-label data.
inline double micro_f1(std::span<const int> predictions, std::span<const int> gold) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                               std::to_string(gold.size()) + " gold labels");
  }
  if (gold.empty()) throw Error(ErrorKind::EmptyInput, "no predictions");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predictions[i] < 0 || gold[i] < 0) throw Error(ErrorKind::InvalidArgument, "negative label");
    if (predictions[i] == gold[i]) {
      ++tp;
    } else {
      ++fp;
      ++fn;
    }
  }
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

/// Mean and sample std over all runs; best template = highest per-template
/// mean over seeds (ties go to the lexicographically first template id).
inline EvalReport aggregate(std::span<const RunResult> results) {
  if (results.empty()) throw Error(ErrorKind::EmptyInput, "no runs to aggregate");
  EvalReport rep;
  rep.variant = results.front().variant;
  rep.shot = results.front().shot;
  rep.runs = results.size();
  // Sort values first so the sums do not depend on input order.
  std::vector<double> values;
  std::map<std::string, std::vector<double>> by_template;
  for (const auto& r : results) {
    if (r.variant != rep.variant || r.shot != rep.shot) {
      throw Error(ErrorKind::InvalidArgument, "aggregate needs a single variant and shot");
    }
    if (!(r.micro_f1 >= 0.0 && r.micro_f1 <= 1.0)) throw Error(ErrorKind::OutOfRange, "micro_f1 outside [0,1]");
    values.push_back(r.micro_f1);
    by_template[r.template_id].push_back(r.micro_f1);
  }
  auto mean_of = [](std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
  };
  rep.mean = mean_of(values);
  if (values.size() > 1) {
    std::sort(values.begin(), values.end());
    double ss = 0.0;
    for (double x : values) ss += (x - rep.mean) * (x - rep.mean);
    rep.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  bool first = true;
  for (const auto& [id, xs] : by_template) {
    const double m = mean_of(xs);
    if (first || m > rep.best_template) {
      rep.best_template = m;
      rep.best_template_id = id;
      first = false;
    }
  }
  return rep;
}

/// Groups runs by (variant, shot) and aggregates each group.
inline std::vector<EvalReport> aggregate_all(std::span<const RunResult> results) {
  std::map<std::pair<std::string, int>, std::vector<RunResult>> groups;
  for (const auto& r : results) groups[{r.variant, r.shot}].push_back(r);
  std::vector<EvalReport> out;
  for (const auto& [key, runs] : groups) out.push_back(aggregate(runs));
  return out;
}

/// Per-class word counts after each stage.
inline std::vector<StageCounts> refinement_report(
    const std::vector<std::pair<std::string, Verbalizer>>& stages) {
  std::vector<StageCounts> out;
  for (const auto& [name, v] : stages) {
    StageCounts c{name, {}};
    for (std::size_t y = 0; y < v.num_classes(); ++y) c.per_class.push_back(v.words(y).size());
    out.push_back(std::move(c));
  }
  return out;
}

inline bool counts_non_increasing(const std::vector<StageCounts>& stages) {
  for (std::size_t s = 1; s < stages.size(); ++s) {
    if (stages[s].per_class.size() != stages[s - 1].per_class.size()) return false;
    for (std::size_t y = 0; y < stages[s].per_class.size(); ++y) {
      if (stages[s].per_class[y] > stages[s - 1].per_class[y]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Output formats

inline std::string runs_csv(std::span<const RunResult> results) {
  std::ostringstream os;
  os << "variant,shot,template,seed,micro_f1\n";
  for (const auto& r : results) {
    os << r.variant << ',' << r.shot << ',' << r.template_id << ',' << r.seed << ','
       << format_double(r.micro_f1) << '\n';
  }
  return os.str();
}

inline std::vector<RunResult> parse_runs_csv(std::istream& in) {
  std::vector<RunResult> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 || trim(line).empty()) continue;
    auto f = split(line, ',');
    RunResult r;
    double shot = 0.0, seed = 0.0;
    if (f.size() != 5 || !parse_double(f[1], shot) || !parse_double(f[3], seed) ||
        !parse_double(f[4], r.micro_f1)) {
      throw LocatedError(ErrorKind::MalformedLine, "runs csv line " + std::to_string(line_no), line_no);
    }
    r.variant = std::string(f[0]);
    r.shot = static_cast<int>(shot);
    r.template_id = std::string(f[2]);
    r.seed = static_cast<std::uint64_t>(seed);
    out.push_back(std::move(r));
  }
  return out;
}

/// "mean ± std (best)" in percentage points, one decimal.
inline std::string format_cell(const EvalReport& r) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.1f \xC2\xB1 %.1f (%.1f)", 100.0 * r.mean, 100.0 * r.std_dev,
                100.0 * r.best_template);
  return buf;
}

inline std::string render_table(std::span<const EvalReport> reports) {
  std::ostringstream os;
  os << "variant              shot  runs  micro-F1 mean \xC2\xB1 std (best)\n";
  for (const auto& r : reports) {
    char head[64];
    std::snprintf(head, sizeof(head), "%-20s %4d  %4zu  ", r.variant.c_str(), r.shot, r.runs);
    os << head << format_cell(r) << '\n';
  }
  return os.str();
}

inline nlohmann::json report_json(std::span<const EvalReport> reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({{"variant", r.variant},
                   {"shot", r.shot},
                   {"runs", r.runs},
                   {"mean", r.mean},
                   {"std", r.std_dev},
                   {"best_template", r.best_template},
                   {"best_template_id", r.best_template_id}});
  }
  return arr;
}

inline std::string render_stage_counts(const std::vector<StageCounts>& stages,
                                       const std::vector<std::string>& class_names) {
  std::ostringstream os;
  os << "stage";
  for (const auto& n : class_names) os << ',' << n;
  os << ",total\n";
  for (const auto& s : stages) {
    os << s.stage;
    for (auto c : s.per_class) os << ',' << c;
    os << ',' << s.total() << '\n';
  }
  return os.str();
}

}  // namespace eval
}  // namespace kpt
