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

#include "specsem/metrics/evaluate.hpp"

#include <cstdio>
#include <map>

#include <nlohmann/json.hpp>

#include "specsem/errors.hpp"

namespace specsem::metrics {

SubsetMetrics summarize(const std::string& name, const ScoredSet& set) {
  SubsetMetrics m;
  m.name = name;
  m.count = set.size();
  m.acc = accuracy(set);
  m.f1 = f1(set);
  const std::size_t pos = set.positives();
  if (pos > 0 && pos < set.size()) m.ap = average_precision(set);
  return m;
}

Report build_report(std::vector<ClipScore> scores) {
  if (scores.empty()) throw ContractError("nothing to evaluate");
  std::vector<std::string> order;
  std::map<std::string, ScoredSet> groups;
  for (const auto& s : scores) {
    auto [it, fresh] = groups.try_emplace(s.subset);
    if (fresh) order.push_back(s.subset);
    it->second.scores.push_back(s.score);
    it->second.labels.push_back(s.label);
  }
  Report r;
  r.scores = std::move(scores);
  double acc = 0.0, f = 0.0, ap = 0.0;
  std::size_t with_ap = 0, count = 0;
  for (const auto& name : order) {
    r.subsets.push_back(summarize(name, groups.at(name)));
    const auto& m = r.subsets.back();
    acc += m.acc;
    f += m.f1;
    count += m.count;
    if (m.ap) {
      ap += *m.ap;
      ++with_ap;
    }
  }
  const auto n = static_cast<double>(r.subsets.size());
  r.mean.name = "mean";
  r.mean.count = count;
  r.mean.acc = acc / n;
  r.mean.f1 = f / n;
  if (with_ap > 0) r.mean.ap = ap / static_cast<double>(with_ap);
  return r;
}

std::string Report::table() const {
  std::size_t width = 6;
  for (const auto& s : subsets) width = std::max(width, s.name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s %6s %8s %8s %8s\n", static_cast<int>(width),
                "subset", "n", "acc", "f1", "ap");
  out += buf;
  auto row = [&](const SubsetMetrics& m) {
    char ap[32];
    if (m.ap) std::snprintf(ap, sizeof ap, "%8.4f", *m.ap);
    else std::snprintf(ap, sizeof ap, "%8s", "n/a");
    std::snprintf(buf, sizeof buf, "%-*s %6zu %8.4f %8.4f %s\n", static_cast<int>(width),
                  m.name.c_str(), m.count, m.acc, m.f1, ap);
    out += buf;
  };
  for (const auto& s : subsets) row(s);
  row(mean);
  return out;
}

std::string Report::json() const {
  auto entry = [](const SubsetMetrics& m) {
    nlohmann::json j = {{"n", m.count}, {"acc", m.acc}, {"f1", m.f1}};
    j["ap"] = m.ap ? nlohmann::json(*m.ap) : nlohmann::json(nullptr);
    return j;
  };
  nlohmann::json subs = nlohmann::json::object();
  for (const auto& s : subsets) subs[s.name] = entry(s);
  nlohmann::json sc = nlohmann::json::array();
  for (const auto& s : scores)
    sc.push_back({{"id", s.id}, {"subset", s.subset}, {"label", s.label}, {"score", s.score}});
  const nlohmann::json j = {{"subsets", subs}, {"mean", entry(mean)}, {"scores", sc}};
  return j.dump(2) + "\n";
}

Report evaluate(const Scorer& scorer, const datagen::DatasetManifest& manifest,
                const std::filesystem::path& root, datagen::Split split,
                const std::optional<Perturbation>& perturbation) {
  const auto entries = manifest.split(split);
  if (entries.empty()) {
    throw DataError("manifest has no clips in the " + datagen::to_string(split) + " split");
  }
  std::vector<ClipScore> scores;
  for (const auto& e : entries) {
    datagen::Clip clip = datagen::load_clip(root / e.path);
    if (perturbation) {
      for (auto& f : clip.frames) f = perturbation->apply(f);
    }
    scores.push_back({e.id, datagen::to_string(e.mode), e.label, scorer(clip)});
  }
  return build_report(std::move(scores));
}

}  // namespace specsem::metrics
