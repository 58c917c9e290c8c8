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

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numeric code paths.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "kpt/kbstore.hpp"

namespace kpt::oracle {

using BigFloat = boost::multiprecision::cpp_dec_float_50;

/// Brute-force scan over every (source, target, score) triple.
inline std::vector<std::pair<std::string, double>> neighborhood(
    const std::vector<std::tuple<std::string, std::string, double>>& edges, const std::string& anchor, double eta) {
  std::multimap<std::pair<double, std::string>, int> ordered;  // key (-score, word)
  for (const auto& [s, t, w] : edges) {
    if (s == anchor && t != anchor && w > eta) ordered.emplace(std::make_pair(-w, t), 0);
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [key, _] : ordered) out.emplace_back(key.second, -key.first);
  return out;
}

inline long double mean(const std::vector<double>& xs) {
  long double s = 0.0L;
  for (double x : xs) s += static_cast<long double>(x);
  return s / static_cast<long double>(xs.size());
}

/// Rank all words of a class by prior (stable), keep the top ceil(n/2); if the
/// class name (index 0) fell out, drop the lowest-ranked kept word and add it.
inline std::set<std::size_t> frequency_keep(const std::vector<double>& priors) {
  const std::size_t n = priors.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return priors[a] > priors[b]; });
  std::vector<std::size_t> kept(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>((n + 1) / 2));
  if (std::find(kept.begin(), kept.end(), std::size_t{0}) == kept.end()) {
    kept.pop_back();
    kept.push_back(0);
  }
  return {kept.begin(), kept.end()};
}

inline long double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  return dot / std::sqrt(na * nb);
}

/// ((sum x^d) / n)^(1/d), direct evaluation.
inline long double power_mean(const std::vector<double>& xs, long double d) {
  long double s = 0;
  for (double x : xs) s += std::pow(static_cast<long double>(x), d);
  return std::pow(s / xs.size(), 1.0L / d);
}

inline std::vector<long double> calibrate_row(const std::vector<double>& row, const std::vector<double>& prior) {
  std::vector<long double> out(row.size());
  long double total = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    out[i] = static_cast<long double>(row[i]) / prior[i];
    total += out[i];
  }
  for (auto& x : out) x /= total;
  return out;
}

/// Label distribution of the weighted log-score rule, evaluated at 50 digits
/// straight from the formulas (no max-shifting).
inline std::vector<std::vector<BigFloat>> weighted_distribution(const std::vector<std::vector<double>>& rows,
                                                                const std::vector<std::size_t>& class_sizes,
                                                                const std::vector<double>& w) {
  std::vector<std::vector<BigFloat>> out;
  for (const auto& row : rows) {
    std::vector<BigFloat> s;
    std::size_t base = 0;
    for (std::size_t size : class_sizes) {
      BigFloat z = 0;
      for (std::size_t i = 0; i < size; ++i) z += boost::multiprecision::exp(BigFloat(w[base + i]));
      BigFloat acc = 0;
      for (std::size_t i = 0; i < size; ++i) {
        BigFloat alpha = boost::multiprecision::exp(BigFloat(w[base + i])) / z;
        acc += alpha * boost::multiprecision::log(BigFloat(row[base + i]));
      }
      s.push_back(acc);
      base += size;
    }
    BigFloat total = 0;
    for (const auto& x : s) total += boost::multiprecision::exp(x);
    std::vector<BigFloat> dist;
    for (const auto& x : s) dist.push_back(boost::multiprecision::exp(x) / total);
    out.push_back(std::move(dist));
  }
  return out;
}

/// Mean cross-entropy from the formulas, for finite differences.
inline long double cross_entropy(const std::vector<std::vector<double>>& rows, const std::vector<int>& gold,
                                 const std::vector<std::size_t>& class_sizes, const std::vector<double>& w) {
  long double loss = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<long double> s;
    std::size_t base = 0;
    for (std::size_t size : class_sizes) {
      long double z = 0;
      for (std::size_t i = 0; i < size; ++i) z += std::exp(static_cast<long double>(w[base + i]));
      long double acc = 0;
      for (std::size_t i = 0; i < size; ++i) {
        acc += std::exp(static_cast<long double>(w[base + i])) / z * std::log(static_cast<long double>(rows[r][base + i]));
      }
      s.push_back(acc);
      base += size;
    }
    long double total = 0;
    for (auto x : s) total += std::exp(x);
    loss += -(s[static_cast<std::size_t>(gold[r])] - std::log(total));
  }
  return loss / rows.size();
}

/// Micro-F1 from a full confusion matrix.
inline double micro_f1(const std::vector<int>& pred, const std::vector<int>& gold, std::size_t n_classes) {
  std::vector<std::vector<std::size_t>> confusion(n_classes, std::vector<std::size_t>(n_classes, 0));
  for (std::size_t i = 0; i < pred.size(); ++i) ++confusion[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(pred[i])];
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    tp += confusion[c][c];
    for (std::size_t o = 0; o < n_classes; ++o) {
      if (o == c) continue;
      fp += confusion[o][c];
      fn += confusion[c][o];
    }
  }
  double p = double(tp) / double(tp + fp), r = double(tp) / double(tp + fn);
  return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

/// Verbalizer with class names c0.. and words c<y>_w<i>.
inline Verbalizer make_verbalizer(const std::vector<std::size_t>& sizes) {
  std::vector<ClassSpec> specs;
  std::vector<std::vector<LabelWord>> words;
  for (std::size_t y = 0; y < sizes.size(); ++y) {
    const std::string name = "c" + std::to_string(y);
    specs.push_back({static_cast<int>(y), name, KnowledgeKind::Graph});
    std::vector<LabelWord> ws{{name, 1}};
    for (std::size_t i = 1; i < sizes[y]; ++i) ws.push_back({name + "_w" + std::to_string(i), 1});
    words.push_back(std::move(ws));
  }
  return Verbalizer(std::move(specs), std::move(words));
}

}  // namespace kpt::oracle
