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

// Support-set driven refinement of label words: contextualized prior,
// frequency refinement, relevance refinement and contextualized calibration.

#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpt/common.hpp"
#include "kpt/kbstore.hpp"
#include "kpt/scorer.hpp"

namespace kpt {

/// Row indices of the unlabeled support set within a score pool.
struct SupportSet {
  std::vector<std::size_t> ids;

  std::size_t size() const noexcept { return ids.size(); }
};

/// P_D(v) per word, aligned with the verbalizer the scores were bound to.
struct ContextualizedPrior {
  std::vector<double> values;
  std::size_t support_size = 0;
};

/// Support-set score columns: one vector per word, one per class (its name).
struct RelevanceProfile {
  std::vector<std::vector<double>> words;
  std::vector<std::vector<double>> classes;
};

/// Per-word record of what refinement saw and decided.
struct WordDiagnostics {
  std::size_t label = 0;
  std::string surface;
  std::optional<double> prior;
  std::vector<double> relevance;  // r(v, y) for every class y
  std::optional<double> ratio;    // R^d
  std::string removed_by;         // "", "fr" or "rr"
};

class RefinementLog {
 public:
  WordDiagnostics& entry(std::size_t label, const std::string& surface) {
    auto key = std::make_pair(label, surface);
    auto it = index_.find(key);
    if (it != index_.end()) return words_[it->second];
    index_.emplace(key, words_.size());
    words_.push_back({label, surface, std::nullopt, {}, std::nullopt, ""});
    return words_.back();
  }

  const std::vector<WordDiagnostics>& words() const noexcept { return words_; }

  nlohmann::json to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& w : words_) {
      nlohmann::json j{{"label", w.label}, {"surface", w.surface}};
      j["prior"] = w.prior ? nlohmann::json(*w.prior) : nlohmann::json(nullptr);
      j["relevance"] = w.relevance;
      j["ratio"] = w.ratio ? nlohmann::json(*w.ratio) : nlohmann::json(nullptr);
      j["removed_by"] = w.removed_by.empty() ? nlohmann::json(nullptr) : nlohmann::json(w.removed_by);
      arr.push_back(std::move(j));
    }
    return arr;
  }

 private:
  std::vector<WordDiagnostics> words_;
  std::map<std::pair<std::size_t, std::string>, std::size_t> index_;
};

namespace refine {

inline constexpr double kDefaultC = 10.0;
inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr double kRelevanceFloor = 1e-12;
/// Above this exponent the power mean is replaced by its limit, the max.
inline constexpr double kMaxPowerMeanExponent = 100.0;

/// A fixed random order of the pool; support sets of growing size are its
/// prefixes, so larger sets always contain smaller ones.
inline std::vector<std::size_t> support_order(std::size_t pool_size, std::uint64_t seed) {
  std::vector<std::size_t> order(pool_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

inline SupportSet sample_support(std::size_t pool_size, std::size_t size, std::uint64_t seed) {
  if (size > pool_size) {
    throw Error(ErrorKind::SupportTooLarge,
                "support size " + std::to_string(size) + " > pool " + std::to_string(pool_size));
  }
  auto order = support_order(pool_size, seed);
  order.resize(size);
  return {std::move(order)};
}

/// Column means of the support-set word scores.
inline ContextualizedPrior contextualized_prior(const WordScoreMatrix& support_scores) {
  if (support_scores.rows() == 0) throw Error(ErrorKind::EmptySupport, "support set has no rows");
  ContextualizedPrior prior;
  prior.support_size = support_scores.rows();
  prior.values.assign(support_scores.cols(), 0.0);
  for (std::size_t r = 0; r < support_scores.rows(); ++r) {
    auto row = support_scores.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) prior.values[j] += row[j];
  }
  for (auto& p : prior.values) p /= static_cast<double>(support_scores.rows());
  return prior;
}

/// Keeps ceil(n/2) words per class: the class name plus the highest-prior
/// other words. Ties keep the earlier-listed word. Surviving words keep their
/// original order.
inline Verbalizer frequency_refine(const Verbalizer& v, const ContextualizedPrior& prior,
                                   RefinementLog* log = nullptr) {
  if (prior.values.size() != v.total_words()) {
    throw Error(ErrorKind::LengthMismatch, "prior is not aligned with the verbalizer");
  }
  std::vector<bool> keep(v.total_words(), false);
  for (std::size_t y = 0; y < v.num_classes(); ++y) {
    const std::size_t base = v.offset(y);
    const std::size_t n = v.words(y).size();
    const std::size_t kept = (n + 1) / 2;
    std::vector<std::size_t> others(n - 1);
    std::iota(others.begin(), others.end(), std::size_t{1});
    std::stable_sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
      return prior.values[base + a] > prior.values[base + b];
    });
    keep[base] = true;
    for (std::size_t i = 0; i + 1 < kept; ++i) keep[base + others[i]] = true;
    if (log) {
      for (std::size_t i = 0; i < n; ++i) {
        auto& d = log->entry(y, v.words(y)[i].surface);
        d.prior = prior.values[base + i];
        if (!keep[base + i]) d.removed_by = "fr";
      }
    }
  }
  return v.retain(keep);
}

/// Columns of the support scores; each class is represented by its name's column.
inline RelevanceProfile relevance_profiles(const WordScoreMatrix& support_scores, const Verbalizer& v) {
  if (support_scores.cols() != v.total_words()) {
    throw Error(ErrorKind::LengthMismatch, "support scores are not aligned with the verbalizer");
  }
  RelevanceProfile p;
  p.words.reserve(v.total_words());
  for (std::size_t j = 0; j < v.total_words(); ++j) p.words.push_back(support_scores.column(j));
  for (std::size_t y = 0; y < v.num_classes(); ++y) p.classes.push_back(p.words[v.offset(y)]);
  return p;
}

/// Cosine similarity; for nonnegative profiles the result is in [0, 1].
inline double relevance_score(std::span<const double> q_word, std::span<const double> q_class) {
  if (q_word.size() != q_class.size()) throw Error(ErrorKind::LengthMismatch, "profile lengths differ");
  double dot = 0.0, nw = 0.0, nc = 0.0;
  for (std::size_t i = 0; i < q_word.size(); ++i) {
    dot += q_word[i] * q_class[i];
    nw += q_word[i] * q_word[i];
    nc += q_class[i] * q_class[i];
  }
  if (nw == 0.0 || nc == 0.0) throw Error(ErrorKind::DegenerateProfile, "zero profile vector");
  return std::clamp(dot / (std::sqrt(nw) * std::sqrt(nc)), 0.0, 1.0);
}

/// d = C / (|Y| - 2 + eps) + 1.
inline double power_mean_exponent(std::size_t n_classes, double C = kDefaultC,
                                  double epsilon = kDefaultEpsilon) {
  return C / (static_cast<double>(n_classes) - 2.0 + epsilon) + 1.0;
}

/// Power mean of order d, evaluated in log space; the max once d exceeds
/// kMaxPowerMeanExponent. Entries are floored at kRelevanceFloor.
inline double power_mean(std::span<const double> values, double d) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "power mean of nothing");
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    logs[i] = std::log(std::max(values[i], kRelevanceFloor));
    hi = std::max(hi, logs[i]);
  }
  if (d > kMaxPowerMeanExponent) return std::exp(hi);
  double acc = 0.0;
  for (double l : logs) acc += std::exp(d * (l - hi));
  return std::exp(hi + (std::log(acc) - std::log(static_cast<double>(values.size()))) / d);
}

/// R^d = r(own) / powermean_d(r(others)).
inline double relevance_ratio(double own, std::span<const double> others, double d) {
  return std::max(own, kRelevanceFloor) / power_mean(others, d);
}

/// Removes non-name words whose R^d falls below 1.
inline Verbalizer relevance_refine(const Verbalizer& v, const RelevanceProfile& profiles,
                                   double C = kDefaultC, double epsilon = kDefaultEpsilon,
                                   RefinementLog* log = nullptr) {
  const std::size_t n_classes = v.num_classes();
  if (n_classes < 2) throw Error(ErrorKind::InvalidArgument, "relevance refinement needs >= 2 classes");
  if (profiles.words.size() != v.total_words() || profiles.classes.size() != n_classes) {
    throw Error(ErrorKind::LengthMismatch, "profiles are not aligned with the verbalizer");
  }
  const double d = power_mean_exponent(n_classes, C, epsilon);
  std::vector<bool> keep(v.total_words(), true);
  std::size_t flat = 0;
  std::vector<double> r(n_classes), others;
  for (std::size_t y = 0; y < n_classes; ++y) {
    for (std::size_t i = 0; i < v.words(y).size(); ++i, ++flat) {
      for (std::size_t c = 0; c < n_classes; ++c) r[c] = relevance_score(profiles.words[flat], profiles.classes[c]);
      others.clear();
      for (std::size_t c = 0; c < n_classes; ++c) {
        if (c != y) others.push_back(r[c]);
      }
      const double ratio = relevance_ratio(r[y], others, d);
      if (i != 0 && ratio < 1.0) keep[flat] = false;
      if (log) {
        auto& diag = log->entry(y, v.words(y)[i].surface);
        diag.relevance = r;
        diag.ratio = ratio;
        if (!keep[flat]) diag.removed_by = "rr";
      }
    }
  }
  return v.retain(keep);
}

/// out_v = (s_v / p_v) / sum_u (s_u / p_u).
inline void calibrate_row(std::span<const double> scores, std::span<const double> prior, std::span<double> out) {
  if (scores.size() != prior.size() || out.size() != scores.size()) {
    throw Error(ErrorKind::LengthMismatch, "calibration row and prior differ in length");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (!(prior[j] > 0.0)) throw Error(ErrorKind::DegeneratePrior, "prior entry " + std::to_string(j));
    out[j] = scores[j] / prior[j];
    total += out[j];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorKind::NonpositiveScore, "calibrated row does not normalize");
  }
  for (auto& x : out) x /= total;
}

inline WordScoreMatrix calibrate(const WordScoreMatrix& scores, const ContextualizedPrior& prior) {
  if (prior.values.size() != scores.cols()) {
    throw Error(ErrorKind::LengthMismatch, "prior is not aligned with the scores");
  }
  WordScoreMatrix out(scores.rows(), scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) calibrate_row(scores.row(r), prior.values, out.row(r));
  return out;
}

}  // namespace refine
}  // namespace kpt
