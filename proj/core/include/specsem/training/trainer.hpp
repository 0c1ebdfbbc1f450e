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

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specsem/datagen/dataset.hpp"
#include "specsem/training/detector.hpp"

namespace specsem::training {

struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;               // mean BCE over the epoch's clips
  std::optional<double> val_acc;   // when validation clips are given
};

// {"epoch":..,"loss":..,"val_acc":..} on one line.
std::string epoch_log_json(const EpochLog& log);

struct TrainOptions {
  std::function<void(const EpochLog&)> on_epoch;
};

struct TrainResult {
  std::vector<EpochLog> epochs;
  double first_batch_loss = 0.0;
  std::size_t steps = 0;
  std::optional<double> pretrain_accuracy;  // content-class training accuracy
};

struct LabeledClip {
  const datagen::Clip* clip = nullptr;
  int label = 0;
};

// Content-class pretraining of the semantic encoder on freshly generated
// real frames, followed by freezing. Returns the final-epoch training
// accuracy of the 4-way classifier.
double pretrain_semantic(Detector& detector);

// Pretrains the semantic branch when configured, then runs cfg.epochs of
// seeded-shuffle minibatch Adam on the BCE loss. Parameters end rounded to
// float32. Throws DataError when the training clips hold a single class and
// NumericError on a non-finite loss.
TrainResult train(Detector& detector, const std::vector<LabeledClip>& train_clips,
                  const std::vector<LabeledClip>& val_clips = {},
                  const TrainOptions& options = {});

// Loads the train (and val, when present) split of a manifest and trains.
TrainResult train(Detector& detector, const datagen::DatasetManifest& manifest,
                  const std::filesystem::path& root, const TrainOptions& options = {});

}  // namespace specsem::training
