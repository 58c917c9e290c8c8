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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and budgets are fixed here and never loosened.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "kpt/kpt.hpp"
#include "oracles.hpp"

using namespace kpt;

namespace {

constexpr double kCalibrationTol = 1e-12;
constexpr double kCalibrationBudgetSec = 1.0;
constexpr double kTwoClassTol = 1e-9;
constexpr double kGradientRelTol = 1e-4;
constexpr double kGradientStep = 1e-5;
constexpr double kGradientBudgetSec = 5.0;
constexpr double kWeightedOracleTol = 1e-10;
constexpr double kCcMinGainPoints = 5.0;
constexpr double kCcBudgetSec = 30.0;
constexpr double kRefinedMinRatio = 0.8;
constexpr double kUnrefinedMaxRatio = 0.6;
constexpr double kSweepMaxGapPoints = 1.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Planted verbalizer: K classes, `clean` words per class (name included),
/// then `noise` extra words per class named n<y>_<i>.
Verbalizer planted(std::size_t k, std::size_t clean, std::size_t noise) {
  std::vector<ClassSpec> specs;
  std::vector<std::vector<LabelWord>> words;
  for (std::size_t y = 0; y < k; ++y) {
    const std::string name = "c" + std::to_string(y);
    specs.push_back({static_cast<int>(y), name, KnowledgeKind::Graph});
    std::vector<LabelWord> ws{{name, 1}};
    for (std::size_t i = 1; i < clean; ++i) ws.push_back({"w" + std::to_string(y) + "_" + std::to_string(i), 1});
    for (std::size_t i = 0; i < noise; ++i) ws.push_back({"n" + std::to_string(y) + "_" + std::to_string(i), 1});
    words.push_back(std::move(ws));
  }
  return Verbalizer(std::move(specs), std::move(words));
}

// Shared synthetic setting for the directional checks: 10 classes, planted
// signal 1.5, per-word log-normal noise 0.7.
constexpr std::size_t kClasses = 10;
constexpr double kSignal = 1.5;
constexpr double kNoise = 0.7;

// ---------------------------------------------------------------------------

Outcome calibration_identity() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(1e-9, 1.0);
  std::uniform_int_distribution<std::size_t> width(2, 64);
  double worst = 0.0;
  for (int r = 0; r < 1000; ++r) {
    const std::size_t n = width(rng);
    std::vector<double> row(n), out(n);
    for (auto& x : row) x = u(rng);
    const double c = u(rng);
    std::vector<double> prior(n, c);
    refine::calibrate_row(row, prior, out);
    long double total = 0;
    for (double x : row) total += x;
    for (std::size_t j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(out[j] - static_cast<double>(row[j] / total)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < kCalibrationTol && secs < kCalibrationBudgetSec,
          fmt("max |dev| %.3g over 1000 rows in %.3f s", worst, secs)};
}

Outcome calibration_scale_invariance() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  double worst = 0.0;
  for (int r = 0; r < 1000; ++r) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 30);
    std::vector<double> row(n), prior(n), base(n), scaled_out(n);
    for (auto& x : row) x = u(rng);
    for (auto& x : prior) x = u(rng);
    refine::calibrate_row(row, prior, base);
    for (double c : {1e-6, 1.0, 1e6}) {
      std::vector<double> scaled(row);
      for (auto& x : scaled) x *= c;
      refine::calibrate_row(scaled, prior, scaled_out);
      for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(scaled_out[j] - base[j]));
    }
  }
  return {worst < kCalibrationTol, fmt("max |dev| %.3g for c in {1e-6, 1, 1e6}", worst)};
}

Outcome frequency_refinement() {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = size(rng);
    auto v = oracle::make_verbalizer({n});
    std::vector<double> p(n);
    // Half the classes draw from a coarse grid so ties are exercised.
    const bool coarse = trial % 2 == 0;
    for (auto& x : p) x = coarse ? std::floor(u(rng) * 5) / 5 + 0.01 : u(rng);
    auto r = refine::frequency_refine(v, {p, 1});
    const auto& kept = r.words(0);
    if (kept.size() != (n + 1) / 2) ++violations;
    if (kept.empty() || kept[0].surface != "c0") ++violations;
    std::set<std::string> kept_set;
    for (const auto& w : kept) kept_set.insert(w.surface);
    double min_kept = std::numeric_limits<double>::infinity();
    double max_removed = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
      if (kept_set.count(v.words(0)[i].surface)) {
        min_kept = std::min(min_kept, p[i]);
      } else {
        max_removed = std::max(max_removed, p[i]);
      }
    }
    if (min_kept < max_removed) ++violations;
  }
  return {violations == 0, fmt("%.0f violations over 500 classes of size 1-50", static_cast<double>(violations))};
}

Outcome relevance_refinement() {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Two-class closed form on 1000 random profiles.
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    auto v = oracle::make_verbalizer({2, 1});
    RelevanceProfile prof;
    std::vector<std::vector<double>> cols(3, std::vector<double>(8));
    for (auto& c : cols) {
      for (auto& x : c) x = u(rng) + 1e-3;
    }
    prof.words = cols;
    prof.classes = {cols[0], cols[2]};
    RefinementLog log;
    refine::relevance_refine(v, prof, refine::kDefaultC, refine::kDefaultEpsilon, &log);
    const long double own = oracle::cosine(cols[1], cols[0]);
    const long double other = oracle::cosine(cols[1], cols[2]);
    const double want = static_cast<double>(own / other);
    worst = std::max(worst, std::abs(*log.words()[1].ratio - want));
  }
  // Monotone in d for |Y| = 3..14.
  std::size_t increases = 0;
  for (std::size_t k = 3; k <= 14; ++k) {
    for (int t = 0; t < 100; ++t) {
      std::vector<double> others(k - 1);
      for (auto& x : others) x = u(rng) < 0.1 ? 0.0 : u(rng);
      const double own = u(rng);
      double prev = std::numeric_limits<double>::infinity();
      for (double d = 1.0; d <= 200.0; d *= 1.25) {
        const double ratio = refine::relevance_ratio(own, others, d);
        if (ratio > prev * (1 + 1e-12)) ++increases;
        prev = ratio;
      }
    }
  }
  // Class names survive arbitrary profiles.
  std::size_t names_removed = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng() % 13);
    std::vector<std::size_t> sizes(k);
    for (auto& s : sizes) s = 1 + static_cast<std::size_t>(rng() % 6);
    auto v = oracle::make_verbalizer(sizes);
    WordScoreMatrix s(10, v.total_words());
    for (auto& x : s.data()) x = u(rng) + 1e-9;
    auto r = refine::relevance_refine(v, refine::relevance_profiles(s, v));
    for (std::size_t y = 0; y < k; ++y) names_removed += r.words(y)[0].surface != v.words(y)[0].surface;
  }
  const bool pass = worst < kTwoClassTol && increases == 0 && names_removed == 0;
  return {pass, fmt("two-class max abs dev %.3g; %.0f monotonicity breaks; %.0f names removed", worst,
                    static_cast<double>(increases), static_cast<double>(names_removed))};
}

Outcome gradient_check() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(1e-4, 1.0), w_dist(-2.0, 2.0);
  double worst = 0.0;
  for (int point = 0; point < 100; ++point) {
    const std::size_t k = 3 + static_cast<std::size_t>(rng() % 3);
    std::vector<std::size_t> sizes(k);
    for (auto& s : sizes) s = 2 + static_cast<std::size_t>(rng() % 7);
    auto v = oracle::make_verbalizer(sizes);
    const std::size_t n = 12;
    WordScoreMatrix s(n, v.total_words());
    for (auto& x : s.data()) x = u(rng);
    std::vector<int> gold(n);
    for (auto& y : gold) y = static_cast<int>(rng() % k);
    VerbalizerWeights w{std::vector<double>(v.total_words())};
    for (auto& x : w.w) x = w_dist(rng);

    auto lg = verbalizer::loss_and_grad(s, gold, v, w);
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < n; ++r) rows.emplace_back(s.row(r).begin(), s.row(r).end());
    long double diff2 = 0, norm2 = 0;
    for (std::size_t j = 0; j < w.w.size(); ++j) {
      auto plus = w.w, minus = w.w;
      plus[j] += kGradientStep;
      minus[j] -= kGradientStep;
      const long double fd = (oracle::cross_entropy(rows, gold, sizes, plus) -
                              oracle::cross_entropy(rows, gold, sizes, minus)) /
                             (2 * kGradientStep);
      diff2 += (lg.grad[j] - fd) * (lg.grad[j] - fd);
      norm2 += fd * fd;
    }
    worst = std::max(worst, static_cast<double>(std::sqrt(diff2 / std::max(norm2, 1e-30L))));
  }
  const double secs = seconds_since(t0);
  return {worst < kGradientRelTol && secs < kGradientBudgetSec,
          fmt("max rel. error %.3g at 100 points in %.3f s", worst, secs)};
}

Outcome weighted_oracle() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> u(1e-6, 1.0), w_dist(-3.0, 3.0);
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t k = 2; k <= 4; ++k) {
    for (std::size_t words = 1; words <= 6; ++words) {
      // Class sizes cycle up to `words` so classes differ in size.
      std::vector<std::size_t> sizes(k);
      for (std::size_t y = 0; y < k; ++y) sizes[y] = 1 + (words - 1 + y) % words;
      sizes[0] = words;
      auto v = oracle::make_verbalizer(sizes);
      WordScoreMatrix s(50, v.total_words());
      for (auto& x : s.data()) x = u(rng);
      VerbalizerWeights w{std::vector<double>(v.total_words())};
      for (auto& x : w.w) x = w_dist(rng);
      auto got = verbalizer::predict_weighted(s, v, w);
      std::vector<std::vector<double>> rows;
      for (std::size_t r = 0; r < 50; ++r) rows.emplace_back(s.row(r).begin(), s.row(r).end());
      auto want = oracle::weighted_distribution(rows, sizes, w.w);
      for (std::size_t r = 0; r < 50; ++r) {
        for (std::size_t y = 0; y < k; ++y) {
          worst = std::max(worst, std::abs(got(r, y) - want[r][y].convert_to<double>()));
        }
      }
      ++cases;
    }
  }
  return {worst < kWeightedOracleTol,
          fmt("max |dev| %.3g over %.0f shapes x 50 instances", worst, static_cast<double>(cases))};
}

/// Ten class names whose priors differ by a factor of 4 end to end.
scorer::SyntheticConfig skewed_config() {
  scorer::SyntheticConfig cfg;
  cfg.signal = kSignal;
  cfg.noise = kNoise;
  for (std::size_t y = 0; y < kClasses; ++y) cfg.word_skew.push_back(std::pow(4.0, y / 9.0));
  return cfg;
}

Outcome pt_reduction() {
  auto v = planted(kClasses, 1, 0);
  auto s = scorer::synthetic_scores(skewed_config(), 1000, v, 107);
  pipeline::ZeroShotOptions none{false, false, false};
  auto out = pipeline::run_zero_shot(v, s.matrix, s.matrix, none);
  std::size_t mismatches = 0;
  for (std::size_t r = 0; r < 1000; ++r) {
    auto row = s.matrix.values.row(r);
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] > row[best]) best = j;
    }
    mismatches += out.predictions[r] != static_cast<int>(best);
  }
  return {mismatches == 0, fmt("%.0f mismatches on 1000 instances", static_cast<double>(mismatches))};
}

Outcome cc_gain() {
  auto t0 = std::chrono::steady_clock::now();
  auto v = planted(kClasses, 1, 0);
  const auto cfg = skewed_config();
  double pt = 0.0, ptcc = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto pool = scorer::synthetic_scores(cfg, 400, v, seed);
    auto test = scorer::synthetic_scores(cfg, 2000, v, seed + 1000);
    auto support = scorer::select_instances(pool.matrix, refine::sample_support(400, 200, seed).ids);
    pipeline::ZeroShotOptions plain{false, false, false}, cc{false, false, true};
    pt += eval::micro_f1(pipeline::run_zero_shot(v, support, test.matrix, plain).predictions, test.gold);
    ptcc += eval::micro_f1(pipeline::run_zero_shot(v, support, test.matrix, cc).predictions, test.gold);
  }
  pt /= 5;
  ptcc /= 5;
  const double gain = 100.0 * (ptcc - pt);
  const double secs = seconds_since(t0);
  return {gain >= kCcMinGainPoints && secs < kCcBudgetSec,
          fmt("PT %.1f -> PT+CC %.1f, gain %.1f points", 100 * pt, 100 * ptcc, gain) + fmt(" in %.2f s", secs)};
}

struct NoisySetting {
  Verbalizer clean;
  Verbalizer noisy;
  scorer::SyntheticConfig cfg;
};

/// Half of every class's words are noise: each noise word is planted in a
/// random other class and gets a log-uniform prior skew in [0.25, 16].
NoisySetting noisy_setting(std::uint64_t seed) {
  NoisySetting s{planted(kClasses, 6, 0), planted(kClasses, 6, 6), {}};
  s.cfg.signal = kSignal;
  s.cfg.noise = kNoise;
  std::mt19937_64 rng(seed * 101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> other(1, kClasses - 1);
  const auto classes = s.noisy.word_classes();
  const auto words = s.noisy.flat_words();
  for (std::size_t j = 0; j < words.size(); ++j) {
    if (words[j].surface[0] == 'n') {
      s.cfg.word_skew.push_back(std::exp(std::log(0.25) + u(rng) * (std::log(16.0) - std::log(0.25))));
      s.cfg.word_affinity.push_back(static_cast<int>((classes[j] + other(rng)) % kClasses));
    } else {
      s.cfg.word_skew.push_back(std::pow(4.0, u(rng)));
      s.cfg.word_affinity.push_back(static_cast<int>(classes[j]));
    }
  }
  return s;
}

Outcome refinement_recovery() {
  double clean = 0.0, refined = 0.0, raw = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto s = noisy_setting(seed);
    auto pool = scorer::synthetic_scores(s.cfg, 400, s.noisy, seed);
    auto test = scorer::synthetic_scores(s.cfg, 2000, s.noisy, seed + 1000);
    auto support = scorer::select_instances(pool.matrix, refine::sample_support(400, 200, seed).ids);
    pipeline::ZeroShotOptions all, none{false, false, false};
    clean += eval::micro_f1(pipeline::run_zero_shot(s.clean, support, test.matrix, all).predictions, test.gold);
    refined += eval::micro_f1(pipeline::run_zero_shot(s.noisy, support, test.matrix, all).predictions, test.gold);
    raw += eval::micro_f1(pipeline::run_zero_shot(s.noisy, support, test.matrix, none).predictions, test.gold);
  }
  const double refined_ratio = refined / clean, raw_ratio = raw / clean;
  return {refined_ratio >= kRefinedMinRatio && raw_ratio < kUnrefinedMaxRatio,
          fmt("clean %.1f; FR+RR+CC on noisy %.3f of clean; unrefined noisy %.3f of clean", 100 * clean / 5,
              refined_ratio, raw_ratio)};
}

Outcome support_sweep_shape() {
  auto v = planted(kClasses, 1, 0);
  const auto cfg = skewed_config();
  // Accuracy at 50 vs 200, averaged over seeds, full zero-shot pipeline.
  double at50 = 0.0, at200 = 0.0;
  std::vector<std::size_t> sizes{10, 50, 200};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto pool = scorer::synthetic_scores(cfg, 1000, v, seed);
    auto test = scorer::synthetic_scores(cfg, 2000, v, seed + 1000);
    eval::SweepInputs in{&v, &pool.matrix, &test.matrix, test.gold, nullptr, {}};
    auto curve = eval::support_sweep(sizes, in, seed);
    at50 += curve[1].micro_f1;
    at200 += curve[2].micro_f1;
  }
  const double gap = 100.0 * std::abs(at200 - at50) / 5;

  // Spread of the prior estimate across 20 resampled support sets.
  auto pool = scorer::synthetic_scores(cfg, 1000, v, 7);
  auto pool_words = scorer::word_scores(pool.matrix, v);
  const std::size_t m = pool_words.cols();
  auto spread = [&](std::size_t size) {
    std::vector<std::vector<double>> est(m);
    for (std::uint64_t r = 0; r < 20; ++r) {
      auto ids = refine::sample_support(pool_words.rows(), size, 500 + r);
      auto prior = refine::contextualized_prior(pool_words.select_rows(ids.ids));
      for (std::size_t j = 0; j < m; ++j) est[j].push_back(prior.values[j]);
    }
    std::vector<double> var(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double mu = static_cast<double>(oracle::mean(est[j]));
      for (double x : est[j]) var[j] += (x - mu) * (x - mu);
      var[j] /= 19.0;
    }
    return var;
  };
  auto v10 = spread(10), v200 = spread(200);
  std::size_t not_lower = 0;
  for (std::size_t j = 0; j < m; ++j) not_lower += !(v200[j] < v10[j]);
  return {gap <= kSweepMaxGapPoints && not_lower == 0,
          fmt("acc@50 %.1f vs acc@200 %.1f (gap %.2f points); ", 100 * at50 / 5, 100 * at200 / 5, gap) +
              fmt("%.0f of %.0f words without lower variance at 200", static_cast<double>(not_lower),
                  static_cast<double>(m))};
}

Outcome few_shot_protocol() {
  // Split properties on an unbalanced labeled pool.
  std::vector<int> labels;
  for (int y = 0; y < 4; ++y) labels.insert(labels.end(), 20 + 5 * y, y);
  std::mt19937_64 shuffle_rng(108);
  std::shuffle(labels.begin(), labels.end(), shuffle_rng);
  std::size_t split_violations = 0;
  for (int k : {1, 5, 10}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto a = train::sample_few_shot(labels, 4, k, seed);
      auto b = train::sample_few_shot(labels, 4, k, seed);
      if (a.train != b.train || a.validation != b.validation) ++split_violations;
      std::set<std::size_t> seen(a.train.begin(), a.train.end());
      for (auto i : a.validation) split_violations += !seen.insert(i).second;
      for (const auto* ids : {&a.train, &a.validation}) {
        std::vector<int> per(4, 0);
        for (auto i : *ids) ++per[static_cast<std::size_t>(labels[i])];
        for (int c : per) split_violations += c != k;
      }
    }
  }

  // Noiseless separable data: every class has one planted word plus two
  // words planted in other classes with a strong prior, so uniform weights
  // misclassify and the weights have to be learned.
  std::size_t solved = 0;
  double worst_acc = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto v = planted(4, 3, 0);
    scorer::SyntheticConfig cfg;
    cfg.noise = 0.0;
    cfg.signal = 3.0;
    cfg.word_affinity.clear();
    cfg.word_skew.clear();
    for (int y = 0; y < 4; ++y) {
      cfg.word_affinity.insert(cfg.word_affinity.end(), {y, (y + 1) % 4, (y + 2) % 4});
      cfg.word_skew.insert(cfg.word_skew.end(), {1.0, 8.0, 8.0});
    }
    auto pool = scorer::synthetic_scores(cfg, 200, v, seed);
    auto words = scorer::word_scores(pool.matrix, v);
    TrainConfig tc;
    tc.k_shot = 5;
    tc.seed = seed;
    tc.epochs = 5;
    tc.batch_size = 1;
    auto split = train::sample_few_shot(pool.gold, 4, tc.k_shot, seed);
    auto tr = words.select_rows(split.train);
    auto va = words.select_rows(split.validation);
    auto tr_labels = train::select_labels(pool.gold, split.train);
    auto va_labels = train::select_labels(pool.gold, split.validation);
    auto res = train::train_weights(tr, tr_labels, va, va_labels, v, tc);
    const double acc =
        eval::micro_f1(verbalizer::argmax_labels(verbalizer::predict_weighted(tr, v, res.weights)), tr_labels);
    worst_acc = std::min(worst_acc, acc);
    solved += acc == 1.0;
  }
  return {split_violations == 0 && solved == 10,
          fmt("%.0f split violations; train accuracy 1.0 on %.0f/10 seeds (worst %.3f)",
              static_cast<double>(split_violations), static_cast<double>(solved), worst_acc)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"calibration identity", calibration_identity},
      {"calibration scale invariance", calibration_scale_invariance},
      {"frequency refinement cardinality and ordering", frequency_refinement},
      {"relevance refinement closed form, monotonicity, names kept", relevance_refinement},
      {"gradient vs central finite differences", gradient_check},
      {"weighted prediction vs high-precision oracle", weighted_oracle},
      {"PT reduction", pt_reduction},
      {"contextualized calibration gain", cc_gain},
      {"refinement recovery under 50% noise words", refinement_recovery},
      {"support sweep shape", support_sweep_shape},
      {"few-shot protocol", few_shot_protocol},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
