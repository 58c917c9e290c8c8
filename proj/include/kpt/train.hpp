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

// Few-shot protocol: k-shot splits and the epoch loop over verbalizer weights
// with best-validation checkpointing.

#include <numeric>
#include <random>
#include <vector>

#include <json.hpp>

#include "kpt/eval.hpp"
#include "kpt/verbalizer.hpp"

namespace kpt {

struct TrainConfig {
  int k_shot = 1;
  int epochs = 5;
  std::uint64_t seed = 0;
  double learning_rate = 0.05;
  std::size_t batch_size = 0;  // 0 = full batch
};

struct FewShotSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_micro_f1 = 0.0;
};

struct TrainResult {
  VerbalizerWeights weights;
  std::vector<EpochRecord> history;
  int chosen_epoch = 0;
};

namespace train {

/// k train and k validation instances per class, disjoint, drawn from a
/// seeded shuffle of each class's indices. Output is class-major.
inline FewShotSplit sample_few_shot(std::span<const int> labels, std::size_t num_classes, int k,
                                    std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes) {
      throw Error(ErrorKind::InvalidArgument, "label out of range at index " + std::to_string(i));
    }
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  const auto need = static_cast<std::size_t>(2 * k);
  for (std::size_t y = 0; y < num_classes; ++y) {
    if (by_class[y].size() < need) {
      throw Error(ErrorKind::InsufficientInstances, "class " + std::to_string(y) + " has " +
                                                        std::to_string(by_class[y].size()) + " instances, needs " +
                                                        std::to_string(need));
    }
  }
  std::mt19937_64 rng(seed);
  FewShotSplit split;
  for (auto& ids : by_class) {
    std::shuffle(ids.begin(), ids.end(), rng);
    split.train.insert(split.train.end(), ids.begin(), ids.begin() + k);
    split.validation.insert(split.validation.end(), ids.begin() + k, ids.begin() + 2 * k);
  }
  return split;
}

inline std::vector<int> select_labels(std::span<const int> labels, std::span<const std::size_t> ids) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (auto i : ids) out.push_back(labels[i]);
  return out;
}

/// Plain gradient descent on the weighted-average cross-entropy, starting from
/// zero weights. Validation runs once per epoch; the snapshot of the epoch with
/// the best validation Micro-F1 is returned (earliest on ties).
inline TrainResult train_weights(const WordScoreMatrix& train_scores, std::span<const int> train_labels,
                                 const WordScoreMatrix& val_scores, std::span<const int> val_labels,
                                 const Verbalizer& v, const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw Error(ErrorKind::InvalidArgument, "epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "learning_rate must be > 0");
  if (train_scores.rows() == 0) throw Error(ErrorKind::EmptyInput, "no training instances");
  if (train_labels.size() != train_scores.rows() || val_labels.size() != val_scores.rows()) {
    throw Error(ErrorKind::LengthMismatch, "labels vs score rows");
  }

  const std::size_t n = train_scores.rows();
  const std::size_t batch = cfg.batch_size == 0 ? n : std::min(cfg.batch_size, n);
  auto weights = VerbalizerWeights::zeros(v);
  TrainResult result;
  result.weights = weights;
  double best_f1 = -1.0;

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (batch < n) std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      std::span<const std::size_t> ids(order.data() + start, stop - start);
      auto batch_scores = train_scores.select_rows(ids);
      auto batch_labels = select_labels(train_labels, ids);
      auto lg = verbalizer::loss_and_grad(batch_scores, batch_labels, v, weights);
      for (std::size_t j = 0; j < weights.w.size(); ++j) weights.w[j] -= cfg.learning_rate * lg.grad[j];
      loss_sum += lg.loss;
      ++steps;
    }
    double val_f1 = 0.0;
    if (val_scores.rows() > 0) {
      auto pred = verbalizer::argmax_labels(verbalizer::predict_weighted(val_scores, v, weights));
      val_f1 = eval::micro_f1(pred, val_labels);
    }
    result.history.push_back({epoch, loss_sum / static_cast<double>(steps), val_f1});
    if (val_f1 > best_f1) {
      best_f1 = val_f1;
      result.weights = weights;
      result.chosen_epoch = epoch;
    }
  }
  return result;
}

inline nlohmann::json run_manifest_json(const TrainConfig& cfg, const TrainResult& result) {
  auto epochs = nlohmann::json::array();
  for (const auto& e : result.history) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_micro_f1", e.val_micro_f1}});
  }
  return {{"config",
           {{"k_shot", cfg.k_shot},
            {"epochs", cfg.epochs},
            {"seed", cfg.seed},
            {"learning_rate", cfg.learning_rate},
            {"batch_size", cfg.batch_size}}},
          {"epochs", epochs},
          {"chosen_epoch", result.chosen_epoch}};
}

}  // namespace train
}  // namespace kpt
