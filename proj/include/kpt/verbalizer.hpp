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

// Turning word scores into labels: plain averaging, softmax-weighted
// log-score averaging, and the cross-entropy objective over the weights.

#include <cmath>
#include <vector>

#include "kpt/common.hpp"
#include "kpt/kbstore.hpp"
#include "kpt/scorer.hpp"

namespace kpt {

/// Raw per-word weights w; alpha is their softmax within each class.
struct VerbalizerWeights {
  std::vector<double> w;

  static VerbalizerWeights zeros(const Verbalizer& v) { return {std::vector<double>(v.total_words(), 0.0)}; }
};

/// One probability row per instance over the classes.
using LabelDistribution = Matrix<double>;

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

namespace verbalizer {

inline void check_aligned(const WordScoreMatrix& scores, const Verbalizer& v) {
  if (scores.cols() != v.total_words()) {
    throw Error(ErrorKind::LengthMismatch, "scores have " + std::to_string(scores.cols()) +
                                               " columns, verbalizer has " + std::to_string(v.total_words()) +
                                               " words");
  }
}

inline std::vector<double> normalized_weights(const VerbalizerWeights& weights, const Verbalizer& v) {
  if (weights.w.size() != v.total_words()) {
    throw Error(ErrorKind::LengthMismatch, "weights are not aligned with the verbalizer");
  }
  std::vector<double> alpha(weights.w.size());
  for (std::size_t y = 0; y < v.num_classes(); ++y) {
    const std::size_t base = v.offset(y);
    const std::size_t n = v.words(y).size();
    double hi = weights.w[base];
    for (std::size_t i = 1; i < n; ++i) hi = std::max(hi, weights.w[base + i]);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      alpha[base + i] = std::exp(weights.w[base + i] - hi);
      total += alpha[base + i];
    }
    for (std::size_t i = 0; i < n; ++i) alpha[base + i] /= total;
  }
  return alpha;
}

/// Mean score of each class's words, per instance.
inline Matrix<double> class_means(const WordScoreMatrix& scores, const Verbalizer& v) {
  check_aligned(scores, v);
  Matrix<double> out(scores.rows(), v.num_classes());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    auto row = scores.row(r);
    for (std::size_t y = 0; y < v.num_classes(); ++y) {
      const std::size_t base = v.offset(y);
      const std::size_t n = v.words(y).size();
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += row[base + i];
      out(r, y) = sum / static_cast<double>(n);
    }
  }
  return out;
}

/// argmax over classes of the mean (usually calibrated) word score.
inline std::vector<int> predict_average(const WordScoreMatrix& scores, const Verbalizer& v) {
  auto means = class_means(scores, v);
  std::vector<int> out(scores.rows());
  for (std::size_t r = 0; r < scores.rows(); ++r) out[r] = static_cast<int>(argmax(means.row(r)));
  return out;
}

/// s(y|x) = sum over V_y of alpha_v * log P(v|x).
inline Matrix<double> class_logit_scores(const WordScoreMatrix& scores, const Verbalizer& v,
                                         const std::vector<double>& alpha) {
  check_aligned(scores, v);
  Matrix<double> s(scores.rows(), v.num_classes());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    auto row = scores.row(r);
    for (std::size_t y = 0; y < v.num_classes(); ++y) {
      const std::size_t base = v.offset(y);
      double acc = 0.0;
      for (std::size_t i = 0; i < v.words(y).size(); ++i) {
        const double p = row[base + i];
        if (!(p > 0.0)) {
          throw LocatedError(ErrorKind::NonpositiveScore, "score at (" + std::to_string(r) + "," +
                                                              std::to_string(base + i) + ")",
                             r, base + i);
        }
        acc += alpha[base + i] * std::log(p);
      }
      s(r, y) = acc;
    }
  }
  return s;
}

inline void softmax_inplace(std::span<double> row) {
  double hi = row[0];
  for (double x : row) hi = std::max(hi, x);
  double total = 0.0;
  for (auto& x : row) {
    x = std::exp(x - hi);
    total += x;
  }
  for (auto& x : row) x /= total;
}

inline LabelDistribution predict_weighted(const WordScoreMatrix& scores, const Verbalizer& v,
                                          const VerbalizerWeights& weights) {
  auto dist = class_logit_scores(scores, v, normalized_weights(weights, v));
  for (std::size_t r = 0; r < dist.rows(); ++r) softmax_inplace(dist.row(r));
  return dist;
}

inline std::vector<int> argmax_labels(const LabelDistribution& dist) {
  std::vector<int> out(dist.rows());
  for (std::size_t r = 0; r < dist.rows(); ++r) out[r] = static_cast<int>(argmax(dist.row(r)));
  return out;
}

/// Mean cross-entropy of the weighted prediction and its gradient in w.
///
/// With delta_iy = (softmax(s_i)_y - [y == gold_i]) / N, and u a word of class y,
///   dL/dw_u = sum_i delta_iy * alpha_u * (log P_iu - s_iy).
inline LossAndGrad loss_and_grad(const WordScoreMatrix& scores, std::span<const int> gold,
                                 const Verbalizer& v, const VerbalizerWeights& weights) {
  if (scores.rows() == 0) throw Error(ErrorKind::EmptyInput, "empty batch");
  if (gold.size() != scores.rows()) throw Error(ErrorKind::LengthMismatch, "gold labels vs batch rows");
  const auto alpha = normalized_weights(weights, v);
  const auto s = class_logit_scores(scores, v, alpha);
  const std::size_t n = scores.rows();
  const std::size_t k = v.num_classes();

  LossAndGrad out;
  out.grad.assign(v.total_words(), 0.0);
  std::vector<double> prob(k);
  for (std::size_t r = 0; r < n; ++r) {
    const int g = gold[r];
    if (g < 0 || static_cast<std::size_t>(g) >= k) throw Error(ErrorKind::InvalidArgument, "gold label out of range");
    auto srow = s.row(r);
    double hi = srow[0];
    for (double x : srow) hi = std::max(hi, x);
    double total = 0.0;
    for (std::size_t y = 0; y < k; ++y) total += std::exp(srow[y] - hi);
    const double log_z = hi + std::log(total);
    out.loss += log_z - srow[static_cast<std::size_t>(g)];
    for (std::size_t y = 0; y < k; ++y) prob[y] = std::exp(srow[y] - log_z);

    auto prow = scores.row(r);
    for (std::size_t y = 0; y < k; ++y) {
      const double delta = prob[y] - (static_cast<std::size_t>(g) == y ? 1.0 : 0.0);
      const std::size_t base = v.offset(y);
      for (std::size_t i = 0; i < v.words(y).size(); ++i) {
        const std::size_t u = base + i;
        out.grad[u] += delta * alpha[u] * (std::log(prow[u]) - srow[y]);
      }
    }
  }
  out.loss /= static_cast<double>(n);
  for (auto& g : out.grad) g /= static_cast<double>(n);
  return out;
}

}  // namespace verbalizer
}  // namespace kpt
