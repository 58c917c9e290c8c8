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

// End-to-end zero-shot and few-shot runs for one (template, seed) pair, and
// the support-size sweep built on the zero-shot run.

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "kpt/eval.hpp"
#include "kpt/refine.hpp"
#include "kpt/scorer.hpp"
#include "kpt/train.hpp"
#include "kpt/verbalizer.hpp"

namespace kpt {
namespace pipeline {

struct ZeroShotOptions {
  bool enable_fr = true;
  bool enable_rr = true;
  bool enable_cc = true;
  bool single_token = false;
  double C = refine::kDefaultC;
  double epsilon = refine::kDefaultEpsilon;
};

struct FewShotOptions {
  bool enable_lr = true;
  bool enable_rr = true;
  bool enable_cc = false;
  bool enable_fr = false;
  bool single_token = false;
  double C = refine::kDefaultC;
  double epsilon = refine::kDefaultEpsilon;
  TrainConfig train;
};

inline std::string variant_tag(const ZeroShotOptions& o) {
  std::string tag = "KPT";
  if (!o.enable_fr) tag += "-FR";
  if (!o.enable_rr) tag += "-RR";
  if (!o.enable_cc) tag += "-CC";
  if (o.single_token) tag += "+ST";
  return tag;
}

inline std::string variant_tag(const FewShotOptions& o) {
  std::string tag = "KPT";
  if (!o.enable_lr) tag += "-LR";
  if (!o.enable_rr) tag += "-RR";
  if (o.enable_cc) tag += "+CC";
  if (o.enable_fr) tag += "+FR";
  if (o.single_token) tag += "+ST";
  return tag;
}

/// Label words after each refinement stage, for reporting.
struct StageTrace {
  std::vector<std::pair<std::string, Verbalizer>> stages;
  RefinementLog log;
};

/// FR then RR on the support set, as enabled. Returns the refined verbalizer.
inline Verbalizer refine_words(Verbalizer v, const ScoreMatrix& support, bool enable_fr, bool enable_rr,
                               double C, double epsilon, StageTrace* trace) {
  if (trace) trace->stages.emplace_back("construct", v);
  if ((enable_fr || enable_rr) && support.values.rows() == 0) {
    throw Error(ErrorKind::EmptySupport, "refinement needs a non-empty support set");
  }
  if (enable_fr) {
    auto prior = refine::contextualized_prior(scorer::word_scores(support, v));
    v = refine::frequency_refine(v, prior, trace ? &trace->log : nullptr);
    if (trace) trace->stages.emplace_back("fr", v);
  }
  if (enable_rr) {
    auto profiles = refine::relevance_profiles(scorer::word_scores(support, v), v);
    v = refine::relevance_refine(v, profiles, C, epsilon, trace ? &trace->log : nullptr);
    if (trace) trace->stages.emplace_back("rr", v);
  }
  return v;
}

inline Verbalizer prepare(const Verbalizer& v, const ScoreManifest& manifest, bool single_token) {
  auto bound = scorer::bind(v, manifest);
  if (single_token) bound = scorer::restrict_single_token(bound, manifest).verbalizer;
  return bound;
}

struct ZeroShotOutcome {
  Verbalizer verbalizer;
  std::vector<int> predictions;
  StageTrace trace;
};

/// construct -> [FR] -> [RR] -> word scores -> [CC] -> class averages.
inline ZeroShotOutcome run_zero_shot(const Verbalizer& constructed, const ScoreMatrix& support,
                                     const ScoreMatrix& eval_scores, const ZeroShotOptions& o) {
  ZeroShotOutcome out;
  auto v = prepare(constructed, eval_scores.manifest, o.single_token);
  v = refine_words(std::move(v), support, o.enable_fr, o.enable_rr, o.C, o.epsilon, &out.trace);
  auto scores = scorer::word_scores(eval_scores, v);
  if (o.enable_cc) {
    if (support.values.rows() == 0) throw Error(ErrorKind::EmptySupport, "calibration needs a support set");
    auto prior = refine::contextualized_prior(scorer::word_scores(support, v));
    scores = refine::calibrate(scores, prior);
  }
  out.predictions = verbalizer::predict_average(scores, v);
  out.verbalizer = std::move(v);
  return out;
}

struct FewShotOutcome {
  Verbalizer verbalizer;
  FewShotSplit split;
  TrainResult training;
  std::vector<int> predictions;
  LabelDistribution distribution;
  StageTrace trace;
};

/// k-shot split and support set from the labeled pool, optional refinement,
/// weight training (or uniform weights without LR), weighted prediction on
/// the evaluation matrix.
inline FewShotOutcome run_few_shot(const Verbalizer& constructed, const ScoreMatrix& pool,
                                   std::span<const int> pool_labels, const ScoreMatrix& eval_scores,
                                   std::size_t support_size, const FewShotOptions& o) {
  if (pool_labels.size() != pool.values.rows()) {
    throw Error(ErrorKind::LengthMismatch, "pool labels vs pool rows");
  }
  FewShotOutcome out;
  auto v = prepare(constructed, eval_scores.manifest, o.single_token);
  out.split = train::sample_few_shot(pool_labels, v.num_classes(), o.train.k_shot, o.train.seed);

  const bool needs_support = o.enable_rr || o.enable_fr || o.enable_cc;
  ScoreMatrix support;
  if (needs_support) {
    auto ids = refine::sample_support(pool.values.rows(), support_size, o.train.seed);
    support = scorer::select_instances(pool, ids.ids);
  }
  v = refine_words(std::move(v), support, o.enable_fr, o.enable_rr, o.C, o.epsilon, &out.trace);

  auto train_scores = scorer::word_scores(scorer::select_instances(pool, out.split.train), v);
  auto val_scores = scorer::word_scores(scorer::select_instances(pool, out.split.validation), v);
  auto test_scores = scorer::word_scores(eval_scores, v);
  if (o.enable_cc) {
    if (support.values.rows() == 0) throw Error(ErrorKind::EmptySupport, "calibration needs a support set");
    auto prior = refine::contextualized_prior(scorer::word_scores(support, v));
    train_scores = refine::calibrate(train_scores, prior);
    val_scores = refine::calibrate(val_scores, prior);
    test_scores = refine::calibrate(test_scores, prior);
  }

  if (o.enable_lr) {
    out.training = train::train_weights(train_scores, train::select_labels(pool_labels, out.split.train), val_scores,
                                        train::select_labels(pool_labels, out.split.validation), v, o.train);
  } else {
    out.training.weights = VerbalizerWeights::zeros(v);
  }
  out.distribution = verbalizer::predict_weighted(test_scores, v, out.training.weights);
  out.predictions = verbalizer::argmax_labels(out.distribution);
  out.verbalizer = std::move(v);
  return out;
}

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; results land in their own slot.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

}  // namespace pipeline

namespace eval {

struct SweepInputs {
  const Verbalizer* verbalizer = nullptr;
  /// Unlabeled pool the support sets are drawn from.
  const ScoreMatrix* pool = nullptr;
  const ScoreMatrix* eval_scores = nullptr;
  std::vector<int> gold;
  /// One-row empty-input prior; required when sizes include 0.
  const ScoreMatrix* context_free = nullptr;
  pipeline::ZeroShotOptions options;
};

struct SweepPoint {
  std::size_t size = 0;
  double micro_f1 = 0.0;
};

/// Zero-shot accuracy per support size on one evaluation set. Support sets
/// are nested prefixes of one seeded pool order. Size 0 substitutes the
/// context-free row for the support set.
inline std::vector<SweepPoint> support_sweep(std::span<const std::size_t> sizes, const SweepInputs& in,
                                             std::uint64_t seed) {
  if (!in.verbalizer || !in.pool || !in.eval_scores) throw Error(ErrorKind::InvalidArgument, "incomplete sweep inputs");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw Error(ErrorKind::InvalidArgument, "sweep sizes must be strictly ascending");
  }
  const auto order = refine::support_order(in.pool->values.rows(), seed);
  std::vector<SweepPoint> curve;
  for (std::size_t size : sizes) {
    if (size > order.size()) {
      throw Error(ErrorKind::SupportTooLarge,
                  "support size " + std::to_string(size) + " > pool " + std::to_string(order.size()));
    }
    ScoreMatrix support;
    if (size == 0) {
      if (!in.context_free) throw Error(ErrorKind::EmptySupport, "size 0 needs a context-free prior row");
      support = *in.context_free;
    } else {
      support = scorer::select_instances(*in.pool, std::span(order.data(), size));
    }
    auto outcome = pipeline::run_zero_shot(*in.verbalizer, support, *in.eval_scores, in.options);
    curve.push_back({size, micro_f1(outcome.predictions, in.gold)});
  }
  return curve;
}

inline std::string sweep_csv(const std::vector<SweepPoint>& curve) {
  std::string out = "support_size,micro_f1\n";
  for (const auto& p : curve) out += std::to_string(p.size) + "," + format_double(p.micro_f1) + "\n";
  return out;
}

}  // namespace eval
}  // namespace kpt
