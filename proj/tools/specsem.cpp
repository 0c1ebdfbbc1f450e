/*
 * Copyright 2026 The SpecSem Authors.
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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "specsem/datagen/dataset.hpp"
#include "specsem/errors.hpp"
#include "specsem/io/binary.hpp"
#include "specsem/io/ppm.hpp"
#include "specsem/io/raw_grid.hpp"
#include "specsem/metrics/evaluate.hpp"
#include "specsem/numerics/tape.hpp"
#include "specsem/spectral/residual.hpp"
#include "specsem/training/checkpoint.hpp"
#include "specsem/training/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace specsem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// A manifest argument may name manifest.json or the dataset directory.
struct Dataset {
  datagen::DatasetManifest manifest;
  fs::path root;
};

Dataset open_dataset(const std::string& arg) {
  fs::path p(arg);
  if (fs::is_directory(p)) p /= "manifest.json";
  Dataset d;
  d.manifest = datagen::read_manifest(p);
  d.root = p.parent_path();
  return d;
}

datagen::Split split_flag(const std::string& name) {
  try {
    return datagen::parse_split(name);
  } catch (const ParseError&) {
    throw UsageError("unknown split '" + name + "' (expected train, val or test)");
  }
}

// Flags shared by every command that builds a model.
struct ModelFlags {
  std::string config;
  std::string variant = "gated";
  std::string head = "transformer";
  std::string semantic_init = "pretrain";
  double radius = spectral::kDefaultRadius;
  double lr = 3e-4;
  double weight_decay = 1e-4;
  std::size_t epochs = 20;
  std::size_t batch = 4;
  std::size_t frames = 8;
  std::uint64_t seed = 1;
  bool unfreeze_semantic = false;

  std::vector<std::pair<CLI::Option*, std::function<void(training::DetectorConfig&)>>> overrides;

  void add(CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON model/training config (flags override it)")
        ->check(CLI::ExistingFile);
    auto bind = [&](CLI::Option* opt, std::function<void(training::DetectorConfig&)> fn) {
      overrides.emplace_back(opt, std::move(fn));
    };
    bind(cmd->add_option("--variant", variant, "sem | spec | concat | gated"),
         [this](auto& c) { c.variant = fusion::parse_variant(variant); });
    bind(cmd->add_option("--head", head, "temporal head: transformer | mean"),
         [this](auto& c) { c.head.kind = temporal::parse_head_kind(head); });
    bind(cmd->add_option("--radius", radius, "high-pass radius in bins of the 224 reference grid")
             ->check(CLI::NonNegativeNumber),
         [this](auto& c) { c.radius = radius; });
    bind(cmd->add_option("--epochs", epochs, "training epochs"),
         [this](auto& c) { c.epochs = epochs; });
    bind(cmd->add_option("--batch", batch, "clips per optimiser step")->check(CLI::PositiveNumber),
         [this](auto& c) { c.batch = batch; });
    bind(cmd->add_option("--lr", lr, "Adam learning rate")->check(CLI::PositiveNumber),
         [this](auto& c) { c.optimizer.lr = lr; });
    bind(cmd->add_option("--weight-decay", weight_decay, "coupled L2 weight decay")
             ->check(CLI::NonNegativeNumber),
         [this](auto& c) { c.optimizer.weight_decay = weight_decay; });
    bind(cmd->add_option("--frames", frames, "frames sampled per clip")->check(CLI::PositiveNumber),
         [this](auto& c) { c.head.frames = frames; });
    bind(cmd->add_option("--seed", seed, "initialisation and shuffling seed"),
         [this](auto& c) { c.seed = seed; });
    bind(cmd->add_option("--semantic-init", semantic_init, "pretrain | random"),
         [this](auto& c) { c.semantic_init = training::parse_semantic_init(semantic_init); });
    bind(cmd->add_flag("--unfreeze-semantic", unfreeze_semantic,
                       "train the semantic encoder too"),
         [](auto& c) { c.frozen_semantic = false; });
  }

  // Without --config the desk preset is sized to the dataset's frames.
  training::DetectorConfig resolve(const datagen::DatasetManifest* manifest) const {
    training::DetectorConfig cfg =
        training::DetectorConfig::desk(manifest != nullptr ? manifest->size : 64);
    if (manifest != nullptr) cfg.head.frames = manifest->frames;
    if (!config.empty()) cfg = training::config_from_json(io::read_file(config), cfg);
    for (const auto& [opt, apply] : overrides)
      if (opt->count() > 0) apply(cfg);
    cfg.head.dim = cfg.encoder.dim;
    try {
      cfg.validate();
    } catch (const ContractError& e) {
      throw UsageError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
  }
};

void write_text(const std::string& path, const std::string& text) {
  io::write_file(path, text);
}

// ---- gen-data -------------------------------------------------------------

void add_gen_data(CLI::App& app, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("gen-data", "Generate a synthetic real/fake clip dataset");
  struct Flags {
    std::string out;
    std::string mode = "standard";
    std::size_t clips = 8, val_clips = 0, test_clips = 0, frames = 8, size = 64;
    std::uint64_t seed = 1;
    double amplitude = 0.02;
    std::vector<std::string> artifacts = {"grid"};
    bool force = false;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--out", f->out, "output directory")->required();
  cmd->add_option("--mode", f->mode, "standard | semantic-confound | noise-confound");
  cmd->add_option("--clips", f->clips, "training clips per class")->check(CLI::PositiveNumber);
  cmd->add_option("--val-clips", f->val_clips, "validation clips per class");
  cmd->add_option("--test-clips", f->test_clips, "test clips per class");
  cmd->add_option("--frames", f->frames, "frames per clip")->check(CLI::PositiveNumber);
  cmd->add_option("--size", f->size, "frame width and height")->check(CLI::Range(8, 4096));
  cmd->add_option("--seed", f->seed, "dataset seed");
  cmd->add_option("--amplitude", f->amplitude, "grid artifact amplitude")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--artifacts", f->artifacts,
                  "fake kinds cycled in standard mode: grid, upsample")
      ->delimiter(',');
  cmd->add_flag("--force", f->force, "overwrite a non-empty output directory");
  cmd->callback([f, &run] {
    run = [f] {
      datagen::DatasetSpec spec;
      spec.mode = datagen::parse_mode(f->mode);
      spec.train_per_class = f->clips;
      spec.val_per_class = f->val_clips;
      spec.test_per_class = f->test_clips;
      spec.frames = f->frames;
      spec.size = f->size;
      spec.seed = f->seed;
      spec.artifact.amplitude = f->amplitude;
      spec.fake_kinds.clear();
      for (const auto& a : f->artifacts) {
        const auto kind = datagen::parse_artifact_kind(a);
        if (kind == datagen::ArtifactKind::kNone) throw UsageError("fakes need an artifact kind");
        spec.fake_kinds.push_back(kind);
      }
      const auto m = datagen::gen_dataset(spec, f->out, f->force);
      std::printf("wrote %zu clips (%s) to %s\n", m.clips.size(),
                  datagen::to_string(m.mode).c_str(), f->out.c_str());
    };
  });
}

// ---- extract-spectral -----------------------------------------------------

void add_extract_spectral(CLI::App& app, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("extract-spectral", "High-pass residual of a single frame");
  struct Flags {
    std::string in, out, raw, spectrum;
    double radius = spectral::kDefaultRadius;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--in", f->in, "input frame (P6 PPM or raw grid)")->required();
  cmd->add_option("--radius", f->radius, "mask radius in bins of the input frame grid")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", f->out, "residual image (rescaled for viewing)")->required();
  cmd->add_option("--raw", f->raw, "raw float64 residual grid");
  cmd->add_option("--dump-spectrum", f->spectrum, "log-magnitude spectrum image");
  cmd->callback([f, &run] {
    run = [f] {
      if (!fs::exists(f->in)) throw DataError("input '" + f->in + "' not found");
      const Image frame = io::is_raw_grid(f->in) ? io::read_raw_grid(f->in) : io::read_ppm(f->in);
      const auto residual = spectral::extract_residual(frame, f->radius);
      io::write_ppm(f->out, io::rescale_for_view(residual));
      if (!f->raw.empty()) io::write_raw_grid(f->raw, residual);
      if (!f->spectrum.empty())
        io::write_ppm(f->spectrum, io::rescale_for_view(spectral::log_magnitude_spectrum(frame)));
    };
  });
}

// ---- train ----------------------------------------------------------------

void add_train(CLI::App& app, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("train", "Train a detector on a dataset's train split");
  struct Flags {
    std::string manifest, out, log;
    ModelFlags model;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--manifest", f->manifest, "dataset directory or manifest.json")->required();
  cmd->add_option("--out", f->out, "checkpoint path")->required();
  cmd->add_option("--log", f->log, "line-delimited JSON training log (default: stdout)");
  f->model.add(cmd);
  cmd->callback([f, &run] {
    run = [f] {
      const Dataset ds = open_dataset(f->manifest);
      training::Detector det(f->model.resolve(&ds.manifest));
      std::ofstream log_file;
      if (!f->log.empty()) {
        if (fs::path(f->log).has_parent_path()) fs::create_directories(fs::path(f->log).parent_path());
        log_file.open(f->log, std::ios::binary);
        if (!log_file) throw DataError("cannot write log '" + f->log + "'");
      }
      std::ostream& log = f->log.empty() ? std::cout : log_file;
      training::TrainOptions opts;
      opts.on_epoch = [&log](const training::EpochLog& e) {
        log << training::epoch_log_json(e) << "\n";
        log.flush();
      };
      const auto result = training::train(det, ds.manifest, ds.root, opts);
      if (result.pretrain_accuracy) {
        std::fprintf(stderr, "semantic pretraining accuracy %.4f\n", *result.pretrain_accuracy);
      }
      training::save_checkpoint(f->out, det);
    };
  });
}

// ---- eval -----------------------------------------------------------------

metrics::Scorer scorer_for(const training::Detector& det) {
  return [&det](const datagen::Clip& clip) { return det.score(clip); };
}

void add_eval(CLI::App& app, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("eval", "Score a dataset split and report Acc/F1/AP");
  struct Flags {
    std::string manifest, model, split = "test", perturb, json_out, table_out;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--manifest", f->manifest, "dataset directory or manifest.json")->required();
  cmd->add_option("--model", f->model, "checkpoint")->required();
  cmd->add_option("--split", f->split, "train | val | test");
  cmd->add_option("--perturb", f->perturb, "none | blur:<sigma> | compress:<quality>");
  cmd->add_option("--json", f->json_out, "write the JSON report here");
  cmd->add_option("--table", f->table_out, "write the text table here");
  cmd->callback([f, &run] {
    run = [f] {
      const auto split = split_flag(f->split);
      std::optional<metrics::Perturbation> perturb;
      if (!f->perturb.empty()) perturb = metrics::parse_perturbation(f->perturb);
      const Dataset ds = open_dataset(f->manifest);
      const auto det = training::load_checkpoint(f->model);
      const auto report = metrics::evaluate(scorer_for(det), ds.manifest, ds.root, split, perturb);
      std::fputs(report.table().c_str(), stdout);
      if (!f->json_out.empty()) write_text(f->json_out, report.json());
      if (!f->table_out.empty()) write_text(f->table_out, report.table());
    };
  });
}

// ---- infer ----------------------------------------------------------------

void add_infer(CLI::App& app, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("infer", "Print 'clip_id p_fake' for clips");
  struct Flags {
    std::string model, manifest, split = "test";
    std::vector<std::string> clips;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--model", f->model, "checkpoint")->required();
  cmd->add_option("--clip", f->clips, "clip directory (repeatable)");
  cmd->add_option("--manifest", f->manifest, "score every clip of a split instead");
  cmd->add_option("--split", f->split, "split used with --manifest");
  cmd->callback([f, &run] {
    run = [f] {
      if (f->clips.empty() && f->manifest.empty()) {
        throw UsageError("infer needs --clip or --manifest");
      }
      const auto split = split_flag(f->split);
      const auto det = training::load_checkpoint(f->model);
      for (const auto& dir : f->clips) {
        const auto clip = datagen::load_clip(dir);
        std::printf("%s %s\n", fs::path(dir).lexically_normal().filename().string().c_str(),
                    fmt_double(det.score(clip)).c_str());
      }
      if (!f->manifest.empty()) {
        const Dataset ds = open_dataset(f->manifest);
        for (const auto& e : ds.manifest.split(split)) {
          const auto clip = datagen::load_clip(ds.root / e.path);
          std::printf("%s %s\n", e.id.c_str(), fmt_double(det.score(clip)).c_str());
        }
      }
    };
  });
}

// ---- ablate ---------------------------------------------------------------

void add_ablate(CLI::App& app, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("ablate", "Train and compare the four fusion variants");
  struct Flags {
    std::string train, split = "test", json_out;
    std::vector<std::string> tests;
    ModelFlags model;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--train", f->train, "training dataset")->required();
  cmd->add_option("--test", f->tests, "test dataset (repeatable; one column pair each)")->required();
  cmd->add_option("--split", f->split, "split of the test datasets to score");
  cmd->add_option("--json", f->json_out, "write the comparison as JSON");
  f->model.add(cmd);
  cmd->callback([f, &run] {
    run = [f] {
      const auto split = split_flag(f->split);
      const Dataset train_ds = open_dataset(f->train);
      std::vector<Dataset> tests;
      for (const auto& t : f->tests) tests.push_back(open_dataset(t));
      const auto base = f->model.resolve(&train_ds.manifest);

      std::vector<std::string> columns;
      for (const auto& t : tests) columns.push_back(datagen::to_string(t.manifest.mode));
      json out = json::object();
      out["columns"] = columns;
      json rows = json::array();
      std::string table = "variant        ";
      char buf[128];
      for (const auto& c : columns) {
        std::snprintf(buf, sizeof buf, " %18s %18s", (c + " Acc").c_str(), (c + " F1").c_str());
        table += buf;
      }
      table += "        Average Acc         Average F1\n";
      for (const auto variant : fusion::all_variants()) {
        auto cfg = base;
        cfg.variant = variant;
        training::Detector det(cfg);
        training::train(det, train_ds.manifest, train_ds.root);
        json row = {{"variant", fusion::to_string(variant)}};
        json cells = json::array();
        double acc_sum = 0.0, f1_sum = 0.0;
        std::snprintf(buf, sizeof buf, "%-15s", fusion::to_string(variant).c_str());
        table += buf;
        for (std::size_t i = 0; i < tests.size(); ++i) {
          const auto r = metrics::evaluate(scorer_for(det), tests[i].manifest, tests[i].root, split);
          cells.push_back({{"subset", columns[i]}, {"acc", r.mean.acc}, {"f1", r.mean.f1}});
          acc_sum += r.mean.acc;
          f1_sum += r.mean.f1;
          std::snprintf(buf, sizeof buf, " %18.4f %18.4f", r.mean.acc, r.mean.f1);
          table += buf;
        }
        const auto n = static_cast<double>(tests.size());
        row["subsets"] = cells;
        row["average"] = {{"acc", acc_sum / n}, {"f1", f1_sum / n}};
        rows.push_back(row);
        std::snprintf(buf, sizeof buf, " %18.4f %18.4f\n", acc_sum / n, f1_sum / n);
        table += buf;
      }
      out["rows"] = rows;
      std::fputs(table.c_str(), stdout);
      if (!f->json_out.empty()) write_text(f->json_out, out.dump(2) + "\n");
    };
  });
}

// ---- sweep-radius ---------------------------------------------------------

void add_sweep_radius(CLI::App& app, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("sweep-radius", "Accuracy and mask area across mask radii");
  struct Flags {
    std::vector<double> radii = {0, 16, 32, 112};
    std::vector<std::string> models;
    std::string test, train, split = "test", json_out, save_dir;
    bool train_each = false;
    ModelFlags model;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--radii", f->radii, "radii on the 224 reference grid")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--test", f->test, "dataset to score")->required();
  cmd->add_option("--split", f->split, "split of the test dataset");
  cmd->add_option("--models", f->models, "one checkpoint per radius")->delimiter(',');
  cmd->add_flag("--train-each", f->train_each, "train one model per radius on --train");
  cmd->add_option("--train", f->train, "training dataset for --train-each");
  cmd->add_option("--save-models", f->save_dir, "with --train-each, keep checkpoints here");
  cmd->add_option("--json", f->json_out, "write the sweep as JSON");
  f->model.add(cmd);
  cmd->callback([f, &run] {
    run = [f] {
      const auto split = split_flag(f->split);
      if (f->train_each == !f->models.empty()) {
        throw UsageError("sweep-radius needs exactly one of --train-each or --models");
      }
      if (!f->models.empty() && f->models.size() != f->radii.size()) {
        throw UsageError("--models needs one checkpoint per radius");
      }
      if (f->train_each && f->train.empty()) throw UsageError("--train-each needs --train");
      const Dataset test = open_dataset(f->test);
      std::optional<Dataset> train_ds;
      if (f->train_each) train_ds = open_dataset(f->train);
      json rows = json::array();
      std::string table = "radius  mask_fraction           acc      f1      ap\n";
      char buf[160];
      for (std::size_t i = 0; i < f->radii.size(); ++i) {
        const double r = f->radii[i];
        std::optional<training::Detector> det;
        if (f->train_each) {
          auto cfg = f->model.resolve(&train_ds->manifest);
          cfg.radius = r;
          det.emplace(cfg);
          training::train(*det, train_ds->manifest, train_ds->root);
          if (!f->save_dir.empty()) {
            training::save_checkpoint(fs::path(f->save_dir) / ("radius_" + fmt_double(r) + ".ckpt"), *det);
          }
        } else {
          det.emplace(training::load_checkpoint(f->models[i]));
          if (det->config().radius != r) {
            throw UsageError("checkpoint '" + f->models[i] + "' was trained with radius " +
                             fmt_double(det->config().radius) + ", not " + fmt_double(r));
          }
        }
        const std::size_t size = det->config().encoder.input_size;
        const auto mask = spectral::working_mask(size, size, det->radius_bins());
        const auto report = metrics::evaluate(scorer_for(*det), test.manifest, test.root, split);
        json row = {{"radius", r},
                    {"mask_fraction", mask.mask_fraction()},
                    {"masked_bins", mask.masked_count()},
                    {"grid", mask.height()},
                    {"acc", report.mean.acc},
                    {"f1", report.mean.f1}};
        row["ap"] = report.mean.ap ? json(*report.mean.ap) : json(nullptr);
        rows.push_back(row);
        std::snprintf(buf, sizeof buf, "%6g  %13.10f  (%5zu)  %6.4f  %6.4f  %6.4f\n", r,
                      mask.mask_fraction(), mask.masked_count(), report.mean.acc, report.mean.f1,
                      report.mean.ap.value_or(0.0));
        table += buf;
      }
      std::fputs(table.c_str(), stdout);
      if (!f->json_out.empty()) write_text(f->json_out, json({{"rows", rows}}).dump(2) + "\n");
    };
  });
}

// ---- gate-maps ------------------------------------------------------------

void add_gate_maps(CLI::App& app, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("gate-maps", "Dump per-frame spectral and gate heatmaps");
  struct Flags {
    std::string clip, model, out;
    std::size_t layer = 0;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--clip", f->clip, "clip directory")->required();
  cmd->add_option("--model", f->model, "gated-variant checkpoint")->required();
  cmd->add_option("--layer", f->layer, "layer 1..L (default: last)");
  cmd->add_option("--out", f->out, "output directory")->required();
  cmd->callback([f, &run] {
    run = [f] {
      const auto det = training::load_checkpoint(f->model);
      const auto clip = datagen::load_clip(f->clip);
      const std::size_t layer = f->layer == 0 ? det.config().encoder.depth : f->layer;
      const auto maps = det.gate_maps(clip, layer);
      fs::create_directories(f->out);
      json frames = json::array();
      for (std::size_t t = 0; t < maps.frames.size(); ++t) {
        const auto& m = maps.frames[t];
        char stem[32];
        std::snprintf(stem, sizeof stem, "frame_%04zu", t);
        const fs::path base = fs::path(f->out) / stem;
        auto dump = [&](const std::vector<double>& v, const char* suffix) {
          io::write_ppm(base.string() + suffix,
                        io::rescale_for_view(training::patch_map_image(v, maps.grid, maps.patch)));
        };
        dump(m.before, "_before.ppm");
        dump(m.gate, "_gate.ppm");
        dump(m.after, "_after.ppm");
        frames.push_back({{"before", m.before}, {"gate", m.gate}, {"after", m.after}});
      }
      const json j = {{"layer", maps.layer}, {"grid", maps.grid}, {"patch", maps.patch},
                      {"frames", frames}};
      write_text((fs::path(f->out) / "gate_maps.json").string(), j.dump(2) + "\n");
    };
  });
}

// ---- bench ----------------------------------------------------------------

void add_bench(CLI::App& app, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("bench", "Inference throughput and analytic MAC count");
  struct Flags {
    std::string config, preset = "desk", json_out;
    std::size_t frames = 16;
  };
  auto f = std::make_shared<Flags>();
  cmd->add_option("--config", f->config, "JSON model config")->check(CLI::ExistingFile);
  cmd->add_option("--preset", f->preset, "desk | vit-b32 (when no --config)");
  cmd->add_option("--frames", f->frames, "timed frames")->check(CLI::PositiveNumber);
  cmd->add_option("--json", f->json_out, "write the measurement as JSON");
  cmd->callback([f, &run] {
    run = [f] {
      training::DetectorConfig cfg;
      if (f->preset == "desk") cfg = training::DetectorConfig::desk();
      else if (f->preset == "vit-b32") cfg = training::DetectorConfig::vit_b32();
      else throw UsageError("unknown preset '" + f->preset + "'");
      if (!f->config.empty()) cfg = training::config_from_json(io::read_file(f->config), cfg);
      const training::Detector det(cfg);
      const auto macs = training::analytic_macs(cfg);
      const auto clip = datagen::gen_real_clip(cfg.seed, 1, cfg.encoder.input_size);
      const auto in = det.prepare_frame(clip.frames.front());
      numerics::NoGradGuard guard;
      auto frame_forward = [&] {
        const auto trace = det.encoder().uses_semantic() ? det.encoder().trace_semantic(in.semantic)
                                                         : fusion::SemanticTrace{};
        return det.encoder().forward(trace, in.spectral);
      };
      frame_forward();
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t i = 0; i < f->frames; ++i) frame_forward();
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const double fps = static_cast<double>(f->frames) / seconds;
      std::printf("frames %zu  seconds %.4f  fps %.2f\n", f->frames, seconds, fps);
      std::printf("macs/block %llu  macs/frame %llu  macs/clip %llu\n",
                  static_cast<unsigned long long>(macs.block),
                  static_cast<unsigned long long>(macs.per_frame),
                  static_cast<unsigned long long>(macs.per_clip));
      if (!f->json_out.empty()) {
        const json j = {{"frames", f->frames},
                        {"seconds", seconds},
                        {"fps", fps},
                        {"macs",
                         {{"block", macs.block},
                          {"branch", macs.branch},
                          {"fusion", macs.fusion},
                          {"per_frame", macs.per_frame},
                          {"head_per_clip", macs.head_per_clip},
                          {"per_clip", macs.per_clip}}},
                        {"config", json::parse(training::config_to_json(cfg))}};
        write_text(f->json_out, j.dump(2) + "\n");
      }
    };
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specsem: spectral-semantic detector for generated video"};
  app.require_subcommand(1);
  std::function<void()> run;
  add_gen_data(app, run);
  add_extract_spectral(app, run);
  add_train(app, run);
  add_eval(app, run);
  add_infer(app, run);
  add_ablate(app, run);
  add_sweep_radius(app, run);
  add_gate_maps(app, run);
  add_bench(app, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  try {
    if (run) run();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return 0;
}
