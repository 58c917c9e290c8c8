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

// kpt: command-line driver for knowledgeable-verbalizer experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "kpt/kpt.hpp"

namespace fs = std::filesystem;
using namespace kpt;

namespace {

/// Misuse of the command line; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

/// Config file + flag overrides. Every config key is also a `--key` flag.
struct ConfigOptions {
  std::string config_path;
  config::KeyValues overrides;
  std::map<std::string, std::string> raw;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "run configuration (key = value)");
    for (const auto& key : config::known_keys()) {
      app->add_option("--" + dashed(key), raw[key], "config key " + key);
    }
    auto toggle = [&](const std::string& flag, const std::string& key, const char* value) {
      app->add_flag_callback(flag, [this, key, value] { overrides[key] = value; });
    };
    toggle("--no-fr", "enable_fr", "false");
    toggle("--no-rr", "enable_rr", "false");
    toggle("--no-cc", "enable_cc", "false");
    toggle("--no-lr", "enable_lr", "false");
    toggle("--fr", "enable_fr", "true");
    toggle("--rr", "enable_rr", "true");
    toggle("--cc", "enable_cc", "true");
    toggle("--lr", "enable_lr", "true");
    toggle("--st", "single_token", "true");
  }

  PipelineConfig resolve(const config::KeyValues& mode_defaults = {}) const {
    static const std::set<std::string> path_keys{"dataset", "scores_dir", "train_dataset", "train_scores_dir",
                                                 "templates", "verbalizer", "classes", "kb",
                                                 "lexicon_pos", "lexicon_neg", "output_dir"};
    config::KeyValues kv = mode_defaults;
    fs::path base;
    if (!config_path.empty()) {
      for (auto& [k, v] : config::load_key_values(config_path)) kv[k] = v;
      base = fs::path(config_path).parent_path();
    }
    // Flag paths are relative to the working directory, not the config file.
    for (const auto& [k, v] : raw) {
      if (v.empty()) continue;
      kv[k] = path_keys.count(k) ? fs::absolute(v).lexically_normal().string() : v;
    }
    for (const auto& [k, v] : overrides) kv[k] = v;
    return config::from_key_values(kv, base);
  }
};

// ---------------------------------------------------------------------------
// Shared loading

Verbalizer construct_from(const PipelineConfig& c) {
  if (c.classes.empty()) throw UsageError("need --classes (or --verbalizer)");
  auto specs = kb::load_class_specs(c.classes);
  std::optional<KnowledgeGraph> graph;
  std::optional<Lexicon> lexicon;
  bool needs_graph = false, needs_lexicon = false;
  for (const auto& s : specs) (s.source == KnowledgeKind::Graph ? needs_graph : needs_lexicon) = true;
  if (needs_graph) {
    if (c.kb.empty()) throw UsageError("graph-sourced classes need --kb");
    graph = kb::load_relatedness_graph(c.kb);
  }
  if (needs_lexicon) {
    if (c.lexicon_pos.empty() || c.lexicon_neg.empty()) {
      throw UsageError("lexicon-sourced classes need --lexicon-pos and --lexicon-neg");
    }
    lexicon = kb::load_sentiment_lexicon(c.lexicon_pos, c.lexicon_neg);
  }
  kb::KnowledgeSources sources{graph ? &*graph : nullptr, lexicon ? &*lexicon : nullptr};
  return kb::construct_verbalizer(specs, sources, c.eta);
}

Verbalizer verbalizer_from(const PipelineConfig& c) {
  if (!c.verbalizer.empty()) return kb::load_verbalizer(c.verbalizer);
  return construct_from(c);
}

std::vector<std::string> template_ids_for(const PipelineConfig& c, const std::string& scores_dir) {
  if (!c.template_ids.empty()) return c.template_ids;
  auto registry = c.templates.empty() ? scorer::default_templates() : scorer::load_template_registry(c.templates);
  std::vector<std::string> ids;
  for (const auto& t : registry) {
    if (fs::exists(fs::path(scores_dir) / (t.template_id + ".manifest.json"))) ids.push_back(t.template_id);
  }
  if (ids.empty()) throw UsageError("no score matrices found in " + scores_dir + " for the template registry");
  return ids;
}

ScoreMatrix load_scores(const std::string& dir, const std::string& template_id, const std::string& suffix = "") {
  fs::path base(dir);
  auto manifest = base / (template_id + suffix + ".manifest.json");
  auto matrix = base / (template_id + suffix + ".kpts");
  if (!fs::exists(manifest) || !fs::exists(matrix)) {
    throw Error(ErrorKind::Io, "missing score matrix for template '" + template_id + "' in " + dir);
  }
  return scorer::load_score_matrix(manifest.string(), matrix.string());
}

std::vector<int> labels_of(const std::vector<Instance>& data, bool required) {
  std::vector<int> out;
  for (const auto& x : data) {
    if (!x.label) {
      if (required) throw Error(ErrorKind::InvalidArgument, "instance " + x.guid + " has no label");
      return {};
    }
    out.push_back(*x.label);
  }
  return out;
}

std::string predictions_jsonl(const std::vector<Instance>& data, std::size_t rows, const std::vector<int>& pred,
                              const LabelDistribution* dist) {
  std::string out;
  for (std::size_t i = 0; i < rows; ++i) {
    nlohmann::json j;
    j["guid"] = i < data.size() ? data[i].guid : std::to_string(i);
    j["predicted_label"] = pred[i];
    if (dist) {
      auto row = dist->row(i);
      j["label_distribution"] = std::vector<double>(row.begin(), row.end());
    }
    out += j.dump() + "\n";
  }
  return out;
}

std::size_t worker_count(const PipelineConfig& c) {
  if (c.threads) return c.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

struct RunKey {
  std::string template_id;
  std::uint64_t seed;
};

std::vector<RunKey> run_grid(const std::vector<std::string>& templates, const std::vector<std::uint64_t>& seeds) {
  std::vector<RunKey> grid;
  for (const auto& t : templates)
    for (auto s : seeds) grid.push_back({t, s});
  return grid;
}

/// Writes runs.csv / report.txt / report.json and lists failures.
int finish_runs(const fs::path& out_dir, const std::vector<RunKey>& grid, const std::vector<std::optional<RunResult>>& results,
                const std::vector<std::string>& errors) {
  std::vector<RunResult> done;
  bool failed = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (results[i]) {
      done.push_back(*results[i]);
    } else if (!errors[i].empty()) {
      failed = true;
      std::cerr << "run failed: template=" << grid[i].template_id << " seed=" << grid[i].seed << ": " << errors[i]
                << "\n";
    }
  }
  write_text(out_dir / "runs.csv", eval::runs_csv(done));
  if (!done.empty()) {
    auto reports = eval::aggregate_all(done);
    auto table = eval::render_table(reports);
    write_text(out_dir / "report.txt", table);
    write_text(out_dir / "report.json", eval::report_json(reports).dump(2) + "\n");
    std::cout << table;
  }
  return failed ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_construct(const PipelineConfig& c, const std::string& out) {
  if (out.empty()) throw UsageError("construct needs --out");
  auto v = construct_from(c);
  write_text(out, kb::format_verbalizer(v));
  nlohmann::json diag = nlohmann::json::array();
  std::optional<KnowledgeGraph> graph;
  if (!c.kb.empty()) graph = kb::load_relatedness_graph(c.kb);
  for (std::size_t y = 0; y < v.num_classes(); ++y) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& w : v.words(y)) {
      std::optional<double> score;
      if (graph) score = graph->edge(v.class_spec(y).class_name, w.surface);
      words.push_back({{"surface", w.surface}, {"kb_score", score ? nlohmann::json(*score) : nlohmann::json(nullptr)}});
    }
    diag.push_back({{"label", y},
                    {"class_name", v.class_spec(y).class_name},
                    {"source", v.class_spec(y).source == KnowledgeKind::Graph ? "graph" : "lexicon"},
                    {"words", words}});
  }
  write_text(out + ".diag.json", diag.dump(2) + "\n");
  std::cerr << "wrote " << v.num_classes() << " classes, " << v.total_words() << " label words to " << out << "\n";
  return 0;
}

ScoreMatrix support_from(const std::string& manifest, const std::string& matrix, std::size_t size, std::uint64_t seed) {
  auto pool = scorer::load_score_matrix(manifest, matrix);
  auto ids = refine::sample_support(pool.values.rows(), size, seed);
  return scorer::select_instances(pool, ids.ids);
}

int cmd_prior(const PipelineConfig& c, const std::string& manifest, const std::string& matrix, std::uint64_t seed,
              const std::string& out) {
  if (manifest.empty() || matrix.empty() || out.empty()) throw UsageError("prior needs --manifest, --matrix, --out");
  auto v = scorer::bind(verbalizer_from(c), scorer::load_manifest(manifest));
  auto support = support_from(manifest, matrix, c.support_size, seed);
  auto prior = refine::contextualized_prior(scorer::word_scores(support, v));
  nlohmann::json words = nlohmann::json::array();
  auto classes = v.word_classes();
  auto flat = v.flat_words();
  for (std::size_t j = 0; j < flat.size(); ++j) {
    words.push_back({{"label", classes[j]}, {"surface", flat[j].surface}, {"prior", prior.values[j]}});
  }
  write_text(out, nlohmann::json{{"support_size", prior.support_size}, {"words", words}}.dump(2) + "\n");
  return 0;
}

int cmd_refine(const PipelineConfig& c, const std::string& manifest, const std::string& matrix, std::uint64_t seed,
               const std::string& out) {
  if (manifest.empty() || matrix.empty() || out.empty()) throw UsageError("refine needs --manifest, --matrix, --out");
  auto m = scorer::load_manifest(manifest);
  auto v = pipeline::prepare(verbalizer_from(c), m, c.single_token);
  auto support = support_from(manifest, matrix, c.support_size, seed);
  pipeline::StageTrace trace;
  auto refined = pipeline::refine_words(v, support, c.enable_fr, c.enable_rr, c.C, c.epsilon, &trace);
  write_text(out, kb::format_verbalizer(refined));
  write_text(out + ".diag.json", trace.log.to_json().dump(2) + "\n");
  std::vector<std::string> names;
  for (const auto& s : refined.classes()) names.push_back(s.class_name);
  std::cout << eval::render_stage_counts(eval::refinement_report(trace.stages), names);
  return 0;
}

int cmd_zero_shot(const PipelineConfig& c) {
  if (c.dataset.empty() || c.scores_dir.empty()) throw UsageError("zero-shot needs dataset and scores_dir");
  const auto constructed = verbalizer_from(c);
  const auto data = scorer::load_dataset(c.dataset, constructed.num_classes());
  const auto gold = labels_of(data, false);
  const auto templates = template_ids_for(c, c.scores_dir);
  const auto pool_dir = c.train_scores_dir.empty() ? c.scores_dir : c.train_scores_dir;

  pipeline::ZeroShotOptions o{c.enable_fr, c.enable_rr, c.enable_cc, c.single_token, c.C, c.epsilon};
  const std::string variant = c.variant.empty() ? pipeline::variant_tag(o) : c.variant;
  const fs::path out_dir = fs::path(c.output_dir) / variant;
  const auto grid = run_grid(templates, c.seeds);
  std::vector<std::optional<RunResult>> results(grid.size());
  std::vector<std::string> errors(grid.size());

  pipeline::parallel_for(grid.size(), worker_count(c), [&](std::size_t i) {
    const auto& key = grid[i];
    try {
      auto eval_scores = load_scores(c.scores_dir, key.template_id);
      if (eval_scores.values.rows() != data.size()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix rows != dataset size");
      }
      ScoreMatrix support;
      const bool needs_support = o.enable_fr || o.enable_rr || o.enable_cc;
      if (needs_support) {
        auto pool = pool_dir == c.scores_dir ? eval_scores : load_scores(pool_dir, key.template_id);
        auto ids = refine::sample_support(pool.values.rows(), c.support_size, key.seed);
        support = scorer::select_instances(pool, ids.ids);
      }
      auto outcome = pipeline::run_zero_shot(constructed, support, eval_scores, o);
      const std::string stem = key.template_id + ".seed" + std::to_string(key.seed);
      write_text(out_dir / (stem + ".predictions.jsonl"),
                 predictions_jsonl(data, eval_scores.values.rows(), outcome.predictions, nullptr));
      write_text(out_dir / (stem + ".verbalizer.txt"), kb::format_verbalizer(outcome.verbalizer));
      write_text(out_dir / (stem + ".verbalizer.txt.diag.json"), outcome.trace.log.to_json().dump(2) + "\n");
      if (!gold.empty()) {
        results[i] = RunResult{key.template_id, key.seed, 0, variant, eval::micro_f1(outcome.predictions, gold)};
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  return finish_runs(out_dir, grid, results, errors);
}

int cmd_train(const PipelineConfig& c) {
  if (c.shot <= 0) throw UsageError("train needs --shot >= 1 (use zero-shot for shot 0)");
  if (c.dataset.empty() || c.scores_dir.empty() || c.train_dataset.empty() || c.train_scores_dir.empty()) {
    throw UsageError("train needs dataset, scores_dir, train_dataset and train_scores_dir");
  }
  const auto constructed = verbalizer_from(c);
  const auto test = scorer::load_dataset(c.dataset, constructed.num_classes());
  const auto gold = labels_of(test, false);
  const auto pool_data = scorer::load_dataset(c.train_dataset, constructed.num_classes());
  const auto pool_labels = labels_of(pool_data, true);
  // Fail fast on k before any run starts.
  train::sample_few_shot(pool_labels, constructed.num_classes(), c.shot, c.seeds.front());
  const auto templates = template_ids_for(c, c.scores_dir);

  pipeline::FewShotOptions o;
  o.enable_lr = c.enable_lr;
  o.enable_rr = c.enable_rr;
  o.enable_cc = c.enable_cc;
  o.enable_fr = c.enable_fr;
  o.single_token = c.single_token;
  o.C = c.C;
  o.epsilon = c.epsilon;
  o.train.k_shot = c.shot;
  o.train.epochs = c.epochs;
  o.train.learning_rate = c.learning_rate;
  o.train.batch_size = c.batch_size;
  const std::string variant = c.variant.empty() ? pipeline::variant_tag(o) : c.variant;
  const fs::path out_dir = fs::path(c.output_dir) / (variant + "-" + std::to_string(c.shot) + "shot");
  const auto grid = run_grid(templates, c.seeds);
  std::vector<std::optional<RunResult>> results(grid.size());
  std::vector<std::string> errors(grid.size());

  pipeline::parallel_for(grid.size(), worker_count(c), [&](std::size_t i) {
    const auto& key = grid[i];
    try {
      auto eval_scores = load_scores(c.scores_dir, key.template_id);
      auto pool = load_scores(c.train_scores_dir, key.template_id);
      if (eval_scores.values.rows() != test.size() || pool.values.rows() != pool_data.size()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix rows != dataset size");
      }
      auto opts = o;
      opts.train.seed = key.seed;
      auto outcome = pipeline::run_few_shot(constructed, pool, pool_labels, eval_scores,
                                            std::min(c.support_size, pool.values.rows()), opts);
      const std::string stem = key.template_id + ".seed" + std::to_string(key.seed);
      write_text(out_dir / (stem + ".predictions.jsonl"),
                 predictions_jsonl(test, eval_scores.values.rows(), outcome.predictions, &outcome.distribution));
      write_text(out_dir / (stem + ".verbalizer.txt"), kb::format_verbalizer(outcome.verbalizer));
      write_text(out_dir / (stem + ".weights.txt"), kb::format_weights(outcome.training.weights.w));
      write_text(out_dir / (stem + ".run.json"), train::run_manifest_json(opts.train, outcome.training).dump(2) + "\n");
      if (!gold.empty()) {
        results[i] = RunResult{key.template_id, key.seed, c.shot, variant, eval::micro_f1(outcome.predictions, gold)};
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  return finish_runs(out_dir, grid, results, errors);
}

int cmd_eval(const std::string& predictions, const std::string& dataset) {
  if (predictions.empty() || dataset.empty()) throw UsageError("eval needs --predictions and --dataset");
  auto data = scorer::load_dataset(dataset);
  std::map<std::string, int> gold_by_guid;
  for (const auto& x : data) {
    if (!x.label) throw Error(ErrorKind::InvalidArgument, "instance " + x.guid + " has no label");
    gold_by_guid[x.guid] = *x.label;
  }
  std::ifstream in(predictions);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + predictions);
  std::vector<int> pred, gold;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line);
    auto guid = j.at("guid").get<std::string>();
    auto it = gold_by_guid.find(guid);
    if (it == gold_by_guid.end()) throw Error(ErrorKind::InvalidArgument, "unknown guid " + guid);
    pred.push_back(j.at("predicted_label").get<int>());
    gold.push_back(it->second);
  }
  std::cout << "instances " << pred.size() << "\nmicro_f1 " << format_double(eval::micro_f1(pred, gold)) << "\n";
  return 0;
}

int cmd_sweep(const PipelineConfig& c) {
  if (c.dataset.empty() || c.scores_dir.empty()) throw UsageError("sweep needs dataset and scores_dir");
  const auto constructed = verbalizer_from(c);
  const auto data = scorer::load_dataset(c.dataset, constructed.num_classes());
  const auto gold = labels_of(data, true);
  const auto templates = template_ids_for(c, c.scores_dir);
  const auto pool_dir = c.train_scores_dir.empty() ? c.scores_dir : c.train_scores_dir;
  pipeline::ZeroShotOptions o{c.enable_fr, c.enable_rr, c.enable_cc, c.single_token, c.C, c.epsilon};
  const auto grid = run_grid(templates, c.seeds);
  std::vector<std::vector<eval::SweepPoint>> curves(grid.size());
  std::vector<std::string> errors(grid.size());

  pipeline::parallel_for(grid.size(), worker_count(c), [&](std::size_t i) {
    try {
      auto eval_scores = load_scores(c.scores_dir, grid[i].template_id);
      auto pool = pool_dir == c.scores_dir ? eval_scores : load_scores(pool_dir, grid[i].template_id);
      std::optional<ScoreMatrix> context_free;
      if (fs::exists(fs::path(pool_dir) / (grid[i].template_id + ".cf.manifest.json"))) {
        context_free = load_scores(pool_dir, grid[i].template_id, ".cf");
      }
      eval::SweepInputs in{&constructed, &pool, &eval_scores, gold, context_free ? &*context_free : nullptr, o};
      curves[i] = eval::support_sweep(c.sizes, in, grid[i].seed);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  bool failed = false;
  std::string detail = "template,seed,support_size,micro_f1\n";
  std::vector<double> sums(c.sizes.size(), 0.0);
  std::size_t complete = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!errors[i].empty()) {
      failed = true;
      std::cerr << "run failed: template=" << grid[i].template_id << " seed=" << grid[i].seed << ": " << errors[i]
                << "\n";
      continue;
    }
    ++complete;
    for (std::size_t s = 0; s < curves[i].size(); ++s) {
      sums[s] += curves[i][s].micro_f1;
      detail += grid[i].template_id + "," + std::to_string(grid[i].seed) + "," + std::to_string(curves[i][s].size) +
                "," + format_double(curves[i][s].micro_f1) + "\n";
    }
  }
  std::vector<eval::SweepPoint> mean_curve;
  if (complete) {
    for (std::size_t s = 0; s < c.sizes.size(); ++s) mean_curve.push_back({c.sizes[s], sums[s] / complete});
  }
  const fs::path out_dir(c.output_dir);
  write_text(out_dir / "sweep.csv", eval::sweep_csv(mean_curve));
  write_text(out_dir / "sweep_runs.csv", detail);
  std::cout << eval::sweep_csv(mean_curve);
  return failed ? 1 : 0;
}

int cmd_report(const std::vector<std::string>& runs, const std::vector<std::string>& stages, const std::string& json_out) {
  if (runs.empty() && stages.empty()) throw UsageError("report needs --runs and/or --stages");
  if (!runs.empty()) {
    std::vector<RunResult> all;
    for (const auto& path : runs) {
      std::ifstream in(path);
      if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
      auto part = eval::parse_runs_csv(in);
      all.insert(all.end(), part.begin(), part.end());
    }
    auto reports = eval::aggregate_all(all);
    std::cout << eval::render_table(reports);
    if (!json_out.empty()) write_text(json_out, eval::report_json(reports).dump(2) + "\n");
  }
  if (!stages.empty()) {
    std::vector<std::pair<std::string, Verbalizer>> vs;
    for (const auto& path : stages) vs.emplace_back(fs::path(path).filename().string(), kb::load_verbalizer(path));
    auto counts = eval::refinement_report(vs);
    std::vector<std::string> names;
    for (const auto& s : vs.front().second.classes()) names.push_back(s.class_name);
    std::cout << eval::render_stage_counts(counts, names);
    if (!eval::counts_non_increasing(counts)) std::cerr << "warning: stage counts increase somewhere\n";
  }
  return 0;
}

int cmd_synth(const PipelineConfig& c, const std::string& out_dir, const std::string& template_id, std::size_t n,
              double signal, double noise, double skew_factor, std::uint64_t seed) {
  if (out_dir.empty()) throw UsageError("synth needs --out-dir");
  auto v = verbalizer_from(c);
  scorer::SyntheticConfig sc;
  sc.signal = signal;
  sc.noise = noise;
  sc.template_id = template_id;
  std::mt19937_64 rng(seed + 7919);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t j = 0; j < v.total_words(); ++j) sc.word_skew.push_back(std::pow(skew_factor, u(rng)));
  auto gen = scorer::synthetic_scores(sc, n, v, seed);
  fs::create_directories(out_dir);
  fs::path base(out_dir);
  scorer::save_score_matrix(gen.matrix, (base / (template_id + ".manifest.json")).string(),
                            (base / (template_id + ".kpts")).string());
  auto cf = scorer::synthetic_context_free(sc, v, seed);
  scorer::save_score_matrix(cf, (base / (template_id + ".cf.manifest.json")).string(),
                            (base / (template_id + ".cf.kpts")).string());
  std::string lines;
  for (std::size_t i = 0; i < n; ++i) {
    Instance x{"synthetic-" + std::to_string(i), "synthetic instance " + std::to_string(i), std::nullopt, gen.gold[i]};
    lines += scorer::instance_json(x).dump() + "\n";
  }
  write_text(base / "dataset.jsonl", lines);
  std::cerr << "wrote " << n << " synthetic instances for template " << template_id << " to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpt: knowledgeable verbalizers for prompt-based classification"};
  app.require_subcommand(1);

  ConfigOptions construct_opts, prior_opts, refine_opts, zs_opts, train_opts, sweep_opts, synth_opts;
  std::string out, manifest, matrix, predictions, dataset, json_out, synth_out, synth_template = "synthetic";
  std::uint64_t seed = 1;
  std::vector<std::string> runs, stages;
  std::size_t synth_n = 200;
  double synth_signal = 2.0, synth_noise = 0.5, synth_skew = 4.0;

  auto* construct = app.add_subcommand("construct", "build a verbalizer from a knowledge source");
  construct_opts.attach(construct);
  construct->add_option("--out", out, "verbalizer file to write");

  auto* prior = app.add_subcommand("prior", "contextualized prior of every label word");
  prior_opts.attach(prior);
  for (auto* sub : {prior, app.add_subcommand("refine", "frequency / relevance refinement of a verbalizer")}) {
    sub->add_option("--manifest", manifest, "score manifest of the support pool");
    sub->add_option("--matrix", matrix, "score matrix of the support pool");
    sub->add_option("--seed", seed, "support sampling seed");
    sub->add_option("--out", out, "output file");
  }
  auto* refine_cmd = app.get_subcommand("refine");
  refine_opts.attach(refine_cmd);

  auto* zero_shot = app.add_subcommand("zero-shot", "zero-shot prediction over all templates and seeds");
  zs_opts.attach(zero_shot);
  auto* train_cmd = app.add_subcommand("train", "few-shot training of verbalizer weights");
  train_opts.attach(train_cmd);
  auto* eval_cmd = app.add_subcommand("eval", "Micro-F1 of a predictions file");
  eval_cmd->add_option("--predictions", predictions, "predictions JSONL");
  eval_cmd->add_option("--dataset", dataset, "labeled dataset JSONL");
  auto* sweep = app.add_subcommand("sweep", "zero-shot accuracy versus support-set size");
  sweep_opts.attach(sweep);
  auto* report = app.add_subcommand("report", "aggregate run CSVs and refinement stage counts");
  report->add_option("--runs", runs, "runs.csv files")->delimiter(',');
  report->add_option("--stages", stages, "verbalizer files in stage order")->delimiter(',');
  report->add_option("--json", json_out, "also write the aggregate as JSON");
  auto* synth = app.add_subcommand("synth", "write a synthetic score matrix and dataset");
  synth_opts.attach(synth);
  synth->add_option("--out-dir", synth_out, "output directory");
  synth->add_option("--template-id", synth_template, "template id used in file names");
  synth->add_option("--n", synth_n, "number of instances");
  synth->add_option("--signal", synth_signal, "log-boost of gold-class words");
  synth->add_option("--noise", synth_noise, "log-normal noise scale");
  synth->add_option("--skew-factor", synth_skew, "max/min word prior skew");
  synth->add_option("--seed", seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed()) return cmd_construct(construct_opts.resolve(), out);
    if (prior->parsed()) return cmd_prior(prior_opts.resolve(), manifest, matrix, seed, out);
    if (refine_cmd->parsed()) return cmd_refine(refine_opts.resolve(), manifest, matrix, seed, out);
    if (zero_shot->parsed()) return cmd_zero_shot(zs_opts.resolve());
    if (train_cmd->parsed()) {
      return cmd_train(train_opts.resolve({{"enable_cc", "false"}, {"enable_fr", "false"}}));
    }
    if (eval_cmd->parsed()) return cmd_eval(predictions, dataset);
    if (sweep->parsed()) return cmd_sweep(sweep_opts.resolve());
    if (report->parsed()) return cmd_report(runs, stages, json_out);
    if (synth->parsed()) {
      return cmd_synth(synth_opts.resolve(), synth_out, synth_template, synth_n, synth_signal, synth_noise, synth_skew,
                       seed);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidArgument ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
