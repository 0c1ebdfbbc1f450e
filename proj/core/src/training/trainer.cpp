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

#include "specsem/training/trainer.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "specsem/backbone/layers.hpp"
#include "specsem/errors.hpp"
#include "specsem/numerics/ops.hpp"
#include "specsem/numerics/tape.hpp"
#include "specsem/training/adam.hpp"

namespace specsem::training {

namespace ops = numerics;

namespace {

constexpr std::uint64_t kShuffleStream = 21;
constexpr std::uint64_t kPretrainStream = 22;
constexpr std::uint64_t kPretrainHeadStream = 23;
constexpr double kPretrainLr = 1e-3;

struct Prepared {
  ClipInputs inputs;
  int label = 0;
  std::vector<fusion::SemanticTrace> traces;
};

std::vector<Prepared> prepare_all(const Detector& d, const std::vector<LabeledClip>& clips,
                                  bool cache) {
  std::vector<Prepared> out;
  out.reserve(clips.size());
  for (const auto& c : clips) {
    Prepared p;
    p.inputs = d.prepare(*c.clip);
    p.label = c.label;
    if (cache) p.traces = d.semantic_traces(p.inputs);
    out.push_back(std::move(p));
  }
  return out;
}

double accuracy_of(const Detector& d, const std::vector<Prepared>& set) {
  std::size_t correct = 0;
  for (const auto& p : set) {
    numerics::NoGradGuard guard;
    const double z = d.logit(p.inputs, p.traces.empty() ? nullptr : &p.traces).item();
    correct += ((z >= 0.0 ? 1 : 0) == p.label) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(set.size());
}

}  // namespace

std::string epoch_log_json(const EpochLog& log) {
  nlohmann::json j = {{"epoch", log.epoch}, {"loss", log.loss}};
  j["val_acc"] = log.val_acc ? nlohmann::json(*log.val_acc) : nlohmann::json(nullptr);
  return j.dump();
}

double pretrain_semantic(Detector& detector) {
  const DetectorConfig& cfg = detector.config();
  auto& encoder = detector.encoder().semantic_encoder();
  const std::size_t size = cfg.encoder.input_size;

  std::vector<Tensor> frames;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < cfg.pretrain_frames; ++i) {
    const auto clip = datagen::gen_real_clip(derive_seed(cfg.seed, kPretrainStream + 1000 * (i + 1)),
                                             1, size);
    frames.push_back(detector.prepare_frame(clip.frames.front()).semantic);
    labels.push_back(clip.content_class);
  }

  Rng head_rng(cfg.seed, kPretrainHeadStream);
  backbone::Linear classifier(cfg.encoder.dim, datagen::kContentClasses, head_rng);
  ParameterList params = encoder.parameters("semantic");
  classifier.collect("pretrain_head", params);
  numerics::set_requires_grad(params, true);
  OptimizerConfig opt = cfg.optimizer;
  opt.lr = kPretrainLr;
  Adam adam(params, opt);
  Rng shuffle(cfg.seed, kPretrainStream);

  double accuracy = 0.0;
  const std::size_t batch = cfg.batch;
  for (std::size_t epoch = 0; epoch < cfg.pretrain_epochs; ++epoch) {
    std::size_t correct = 0;
    const auto order = shuffle.permutation(frames.size());
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const double inv = 1.0 / static_cast<double>(end - start);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        numerics::Tape tape;
        numerics::Tape::Scope scope(tape);
        const Tensor logits = classifier(backbone::pool(encoder.forward(frames[i])));
        const auto z = logits.data();
        std::size_t arg = 0;
        for (std::size_t c = 1; c < z.size(); ++c)
          if (z[c] > z[arg]) arg = c;
        correct += arg == labels[i] ? 1 : 0;
        tape.backward(ops::scale(ops::cross_entropy(logits, labels[i]), inv));
      }
      adam.step();
      adam.zero_grad();
    }
    accuracy = static_cast<double>(correct) / static_cast<double>(frames.size());
  }
  numerics::round_to_float32(encoder.parameters("semantic"));
  detector.refresh_trainable();
  return accuracy;
}

TrainResult train(Detector& detector, const std::vector<LabeledClip>& train_clips,
                  const std::vector<LabeledClip>& val_clips, const TrainOptions& options) {
  std::size_t positives = 0;
  for (const auto& c : train_clips) positives += c.label == datagen::kFakeLabel ? 1 : 0;
  if (positives == 0 || positives == train_clips.size()) {
    throw DataError("training data must contain both real and fake clips");
  }
  const DetectorConfig& cfg = detector.config();
  TrainResult result;
  const bool uses_semantic = detector.encoder().uses_semantic();
  if (uses_semantic && cfg.semantic_init == SemanticInit::kPretrain && cfg.pretrain_epochs > 0) {
    result.pretrain_accuracy = pretrain_semantic(detector);
  }
  detector.refresh_trainable();

  const bool cache = uses_semantic && cfg.frozen_semantic;
  const auto train_set = prepare_all(detector, train_clips, cache);
  const auto val_set = prepare_all(detector, val_clips, cache);

  Adam adam(detector.trainable_parameters(), cfg.optimizer);
  adam.zero_grad();
  Rng shuffle(cfg.seed, kShuffleStream);
  const std::size_t n = train_set.size();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto order = shuffle.permutation(n);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch) {
      const std::size_t end = std::min(n, start + cfg.batch);
      const double inv = 1.0 / static_cast<double>(end - start);
      double batch_loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const Prepared& p = train_set[order[k]];
        numerics::Tape tape;
        numerics::Tape::Scope scope(tape);
        const Tensor z = detector.logit(p.inputs, cache ? &p.traces : nullptr);
        const Tensor loss = ops::bce_with_logits(z, static_cast<double>(p.label));
        const double value = loss.item();
        if (!std::isfinite(value)) {
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                             ", step " + std::to_string(result.steps + 1));
        }
        batch_loss += value * inv;
        loss_sum += value;
        tape.backward(ops::scale(loss, inv));
      }
      if (result.steps == 0) result.first_batch_loss = batch_loss;
      adam.step();
      adam.zero_grad();
      ++result.steps;
    }
    EpochLog log;
    log.epoch = epoch;
    log.loss = loss_sum / static_cast<double>(n);
    if (!val_set.empty()) log.val_acc = accuracy_of(detector, val_set);
    result.epochs.push_back(log);
    if (options.on_epoch) options.on_epoch(log);
  }
  numerics::round_to_float32(detector.parameters());
  return result;
}

TrainResult train(Detector& detector, const datagen::DatasetManifest& manifest,
                  const std::filesystem::path& root, const TrainOptions& options) {
  std::vector<datagen::Clip> train_clips, val_clips;
  std::vector<int> train_labels, val_labels;
  for (const auto& e : manifest.clips) {
    if (e.split == datagen::Split::kTrain) {
      train_clips.push_back(datagen::load_clip(root / e.path));
      train_labels.push_back(e.label);
    } else if (e.split == datagen::Split::kVal) {
      val_clips.push_back(datagen::load_clip(root / e.path));
      val_labels.push_back(e.label);
    }
  }
  if (train_clips.empty()) throw DataError("manifest has no training clips");
  std::vector<LabeledClip> tr, va;
  for (std::size_t i = 0; i < train_clips.size(); ++i) tr.push_back({&train_clips[i], train_labels[i]});
  for (std::size_t i = 0; i < val_clips.size(); ++i) va.push_back({&val_clips[i], val_labels[i]});
  return train(detector, tr, va, options);
}

}  // namespace specsem::training
