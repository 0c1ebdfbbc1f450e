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

#include "specsem/datagen/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "specsem/errors.hpp"
#include "specsem/io/binary.hpp"
#include "specsem/io/ppm.hpp"

namespace specsem::datagen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSplitStride = 1000000;
constexpr std::uint64_t kIndependentFakeOffset = 100000;

std::uint64_t split_offset(Split split) {
  switch (split) {
    case Split::kTrain: return 0;
    case Split::kVal: return 300000;
    case Split::kTest: return 600000;
  }
  return 0;
}

std::string label_name(int label) { return label == kFakeLabel ? "fake" : "real"; }

std::string frame_name(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.ppm", t);
  return buf;
}

std::string clip_name(int label, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%05zu", label_name(label).c_str(), index);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void frame_moments(const std::vector<const Clip*>& clips, std::vector<double>& means,
                   std::vector<double>& variances) {
  for (const Clip* clip : clips) {
    for (const Image& f : clip->frames) {
      double m = 0.0;
      for (double v : f.data) m += v;
      m /= static_cast<double>(f.data.size());
      double var = 0.0;
      for (double v : f.data) var += (v - m) * (v - m);
      means.push_back(m);
      variances.push_back(var / static_cast<double>(f.data.size()));
    }
  }
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Clip-level feature: frames box-averaged to 8x8 per channel, then averaged
// over time.
std::vector<double> downsampled_features(const Clip& clip) {
  constexpr std::size_t kGrid = 8;
  const Image& first = clip.frames.front();
  std::vector<double> feat(first.channels * kGrid * kGrid, 0.0);
  for (const Image& f : clip.frames) {
    for (std::size_t c = 0; c < f.channels; ++c)
      for (std::size_t y = 0; y < f.height; ++y)
        for (std::size_t x = 0; x < f.width; ++x) {
          const std::size_t by = y * kGrid / f.height, bx = x * kGrid / f.width;
          feat[(c * kGrid + by) * kGrid + bx] += f.at(c, y, x);
        }
  }
  const double cell = static_cast<double>(first.height * first.width) /
                      static_cast<double>(kGrid * kGrid) *
                      static_cast<double>(clip.frames.size());
  for (double& v : feat) v /= cell;
  return feat;
}

json artifact_to_json(const ArtifactDescriptor& a) {
  json comps = json::array();
  for (const auto& c : a.components)
    comps.push_back({{"fy", c.fy}, {"fx", c.fx}, {"phase", c.phase}});
  return {{"kind", to_string(a.kind)},
          {"amplitude", a.amplitude},
          {"components", comps},
          {"frame_gains", a.frame_gains}};
}

ArtifactDescriptor artifact_from_json(const json& j) {
  ArtifactDescriptor a;
  a.kind = parse_artifact_kind(j.at("kind").get<std::string>());
  a.amplitude = j.at("amplitude").get<double>();
  for (const auto& c : j.at("components"))
    a.components.push_back({c.at("fy").get<int>(), c.at("fx").get<int>(),
                            c.at("phase").get<double>()});
  a.frame_gains = j.at("frame_gains").get<std::vector<double>>();
  return a;
}

}  // namespace

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw ParseError("unknown split '" + name + "'");
}

std::vector<ManifestEntry> DatasetManifest::split(Split which) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : clips)
    if (e.split == which) out.push_back(e);
  return out;
}

std::uint64_t clip_seed(std::uint64_t dataset_seed, Split split, int label,
                        std::size_t index, DatasetMode mode) {
  std::uint64_t s = dataset_seed * kSplitStride + split_offset(split) + index;
  if (label == kFakeLabel && mode != DatasetMode::kSemanticConfound)
    s += kIndependentFakeOffset;
  return s;
}

std::vector<std::pair<ManifestEntry, Clip>> build_dataset(const DatasetSpec& spec) {
  if (spec.train_per_class == 0) {
    throw ContractError("datasets need at least one clip per class in the train split");
  }
  if (spec.fake_kinds.empty()) throw ContractError("no fake artifact kinds given");
  for (auto k : spec.fake_kinds)
    if (k == ArtifactKind::kNone) throw ContractError("fake artifact kind cannot be none");
  std::vector<std::pair<ManifestEntry, Clip>> out;
  const std::pair<Split, std::size_t> splits[] = {{Split::kTrain, spec.train_per_class},
                                                  {Split::kVal, spec.val_per_class},
                                                  {Split::kTest, spec.test_per_class}};
  for (const auto& [split, count] : splits) {
    for (int label : {kRealLabel, kFakeLabel}) {
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t seed = clip_seed(spec.seed, split, label, i, spec.mode);
        Clip clip;
        if (label == kRealLabel) {
          clip = gen_real_clip(seed, spec.frames, spec.size);
          if (spec.mode == DatasetMode::kNoiseConfound)
            add_sparks(clip, spec.sparks, spec.artifact);
        } else {
          const ArtifactKind kind = spec.mode == DatasetMode::kStandard
                                        ? spec.fake_kinds[i % spec.fake_kinds.size()]
                                        : ArtifactKind::kGrid;
          clip = gen_fake_clip(seed, spec.frames, spec.size, kind, spec.artifact);
        }
        clip.mode = spec.mode;
        ManifestEntry e;
        const std::string name = clip_name(label, i);
        e.id = to_string(split) + "/" + name;
        e.path = e.id;
        e.label = label;
        e.mode = spec.mode;
        e.seed = seed;
        e.split = split;
        e.artifact = clip.artifact.kind;
        e.content_class = clip.content_class;
        out.emplace_back(std::move(e), std::move(clip));
      }
    }
  }
  return out;
}

DatasetManifest gen_dataset(const DatasetSpec& spec, const fs::path& root, bool force) {
  if (fs::exists(root) && !fs::is_directory(root)) {
    throw DataError("output path '" + root.string() + "' exists and is not a directory");
  }
  if (fs::exists(root) && !fs::is_empty(root)) {
    if (!force) {
      throw DataError("output directory '" + root.string() +
                      "' is not empty (use --force to overwrite)");
    }
    for (const char* sub : {"train", "val", "test"}) fs::remove_all(root / sub);
    fs::remove(root / "manifest.json");
  }
  auto clips = build_dataset(spec);

  std::vector<const Clip*> reals, fakes;
  for (const auto& [entry, clip] : clips)
    (entry.label == kRealLabel ? reals : fakes).push_back(&clip);
  const MarginalGap gap = marginal_gap(reals, fakes);
  if (gap.mean_gap >= kMaxMarginalGap || gap.variance_gap >= kMaxMarginalGap) {
    throw DataError("real/fake marginal statistics differ too much (mean gap " +
                    std::to_string(gap.mean_gap) + ", variance gap " +
                    std::to_string(gap.variance_gap) + ")");
  }

  DatasetManifest manifest;
  manifest.mode = spec.mode;
  manifest.seed = spec.seed;
  manifest.frames = spec.frames;
  manifest.size = spec.size;
  fs::create_directories(root);
  for (const auto& [entry, clip] : clips) {
    write_clip(root / entry.path, clip);
    manifest.clips.push_back(entry);
  }
  write_manifest(root / "manifest.json", manifest);
  return manifest;
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  json clips = json::array();
  for (const auto& e : manifest.clips) {
    clips.push_back({{"id", e.id},
                     {"path", e.path},
                     {"label", e.label},
                     {"mode", to_string(e.mode)},
                     {"seed", e.seed},
                     {"split", to_string(e.split)},
                     {"artifact", to_string(e.artifact)},
                     {"content_class", e.content_class}});
  }
  json j = {{"version", manifest.version},
            {"mode", to_string(manifest.mode)},
            {"seed", manifest.seed},
            {"frames", manifest.frames},
            {"size", manifest.size},
            {"clips", clips}};
  return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text) {
  DatasetManifest m;
  try {
    const json j = json::parse(text);
    m.version = j.at("version").get<int>();
    if (m.version != 1) {
      throw ParseError("unsupported manifest version " + std::to_string(m.version));
    }
    m.mode = parse_mode(j.at("mode").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.frames = j.at("frames").get<std::size_t>();
    m.size = j.at("size").get<std::size_t>();
    std::set<std::string> paths;
    for (const auto& c : j.at("clips")) {
      ManifestEntry e;
      e.id = c.at("id").get<std::string>();
      e.path = c.at("path").get<std::string>();
      e.label = c.at("label").get<int>();
      if (e.label != kRealLabel && e.label != kFakeLabel) {
        throw ParseError("clip '" + e.id + "' has label " + std::to_string(e.label));
      }
      e.mode = parse_mode(c.at("mode").get<std::string>());
      e.seed = c.at("seed").get<std::uint64_t>();
      e.split = parse_split(c.at("split").get<std::string>());
      e.artifact = parse_artifact_kind(c.value("artifact", std::string("none")));
      e.content_class = c.value("content_class", std::size_t{0});
      if (!paths.insert(e.path).second) {
        throw ParseError("manifest lists clip path '" + e.path + "' twice");
      }
      m.clips.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed manifest: ") + ex.what());
  } catch (const UsageError& ex) {
    throw ParseError(std::string("malformed manifest: ") + ex.what());
  }
  return m;
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  io::write_file(path, manifest_to_json(manifest));
}

DatasetManifest read_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("manifest '" + path.string() + "' not found");
  return manifest_from_json(io::read_file(path));
}

void write_clip(const fs::path& dir, const Clip& clip) {
  fs::create_directories(dir);
  for (std::size_t t = 0; t < clip.frames.size(); ++t)
    io::write_ppm(dir / frame_name(t), clip.frames[t]);
  json sparks = json::array();
  for (const auto& frame : clip.sparks) {
    json pts = json::array();
    for (const auto& s : frame) pts.push_back({s.y, s.x});
    sparks.push_back(pts);
  }
  const json j = {{"label", clip.label},
                  {"mode", to_string(clip.mode)},
                  {"seed", clip.seed},
                  {"content_class", clip.content_class},
                  {"frames", clip.frames.size()},
                  {"artifact", artifact_to_json(clip.artifact)},
                  {"sparks", sparks}};
  io::write_file(dir / "clip.json", j.dump(2) + "\n");
}

Clip load_clip(const fs::path& dir) {
  const fs::path meta = dir / "clip.json";
  if (!fs::exists(meta)) throw DataError("clip metadata '" + meta.string() + "' not found");
  Clip clip;
  std::size_t frames = 0;
  try {
    const json j = json::parse(io::read_file(meta));
    clip.label = j.at("label").get<int>();
    clip.mode = parse_mode(j.at("mode").get<std::string>());
    clip.seed = j.at("seed").get<std::uint64_t>();
    clip.content_class = j.at("content_class").get<std::size_t>();
    frames = j.at("frames").get<std::size_t>();
    clip.artifact = artifact_from_json(j.at("artifact"));
    for (const auto& frame : j.at("sparks")) {
      std::vector<Spark> pts;
      for (const auto& p : frame) pts.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
      clip.sparks.push_back(std::move(pts));
    }
  } catch (const json::exception& ex) {
    throw ParseError("malformed clip metadata '" + meta.string() + "': " + ex.what());
  }
  if (frames == 0) throw DataError("clip '" + dir.string() + "' has no frames");
  for (std::size_t t = 0; t < frames; ++t) {
    const fs::path p = dir / frame_name(t);
    if (!fs::exists(p)) throw DataError("frame '" + p.string() + "' not found");
    clip.frames.push_back(io::read_ppm(p));
    if (!clip.frames.back().same_extents(clip.frames.front())) {
      throw DataError("frame '" + p.string() + "' has different extents");
    }
  }
  return clip;
}

MarginalGap marginal_gap(const std::vector<const Clip*>& reals,
                         const std::vector<const Clip*>& fakes) {
  std::vector<double> rm, rv, fm, fv;
  frame_moments(reals, rm, rv);
  frame_moments(fakes, fm, fv);
  return {relative_gap(median(rm), median(fm)), relative_gap(median(rv), median(fv))};
}

double downsampled_probe_accuracy(const std::vector<const Clip*>& train,
                                  const std::vector<const Clip*>& test) {
  if (train.empty() || test.empty()) throw ContractError("probe needs train and test clips");
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (const Clip* c : train) {
    xs.push_back(downsampled_features(*c));
    ys.push_back(c->label == kFakeLabel ? 1.0 : 0.0);
  }
  const std::size_t dim = xs.front().size();
  std::vector<double> mu(dim, 0.0), sd(dim, 0.0);
  for (const auto& x : xs)
    for (std::size_t k = 0; k < dim; ++k) mu[k] += x[k];
  for (double& m : mu) m /= static_cast<double>(xs.size());
  for (const auto& x : xs)
    for (std::size_t k = 0; k < dim; ++k) sd[k] += (x[k] - mu[k]) * (x[k] - mu[k]);
  for (double& s : sd) s = std::sqrt(s / static_cast<double>(xs.size())) + 1e-9;
  auto standardize = [&](std::vector<double> x) {
    for (std::size_t k = 0; k < dim; ++k) x[k] = (x[k] - mu[k]) / sd[k];
    return x;
  };
  for (auto& x : xs) x = standardize(x);

  // Full-batch gradient descent on L2-regularised logistic loss.
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  constexpr double kRate = 0.1, kL2 = 1e-3;
  for (int it = 0; it < 500; ++it) {
    std::vector<double> gw(dim, 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double z = b;
      for (std::size_t k = 0; k < dim; ++k) z += w[k] * xs[i][k];
      const double err = 1.0 / (1.0 + std::exp(-z)) - ys[i];
      for (std::size_t k = 0; k < dim; ++k) gw[k] += err * xs[i][k];
      gb += err;
    }
    const auto n = static_cast<double>(xs.size());
    for (std::size_t k = 0; k < dim; ++k) w[k] -= kRate * (gw[k] / n + kL2 * w[k]);
    b -= kRate * gb / n;
  }
  std::size_t correct = 0;
  for (const Clip* c : test) {
    const auto x = standardize(downsampled_features(*c));
    double z = b;
    for (std::size_t k = 0; k < dim; ++k) z += w[k] * x[k];
    const int pred = z >= 0.0 ? kFakeLabel : kRealLabel;
    correct += pred == c->label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace specsem::datagen
