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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "specsem/io/binary.hpp"
#include "specsem/spectral/mask.hpp"
#include "specsem/spectral/residual.hpp"
#include "specsem/training/config.hpp"
#include "specsem/training/detector.hpp"

namespace specsem {
namespace {

using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(SPECSEM_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) { return io::read_file(p); }

// Shared tiny dataset and model, built once through the CLI itself.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    data_ = (dir_->path() / "data").string();
    model_ = (dir_->path() / "m.ckpt").string();
    ASSERT_EQ(run("gen-data --out " + data_ + " --clips 2 --test-clips 2 --frames 2 --size 32 --seed 4").code, 0);
    ASSERT_EQ(run("train --manifest " + data_ + " --out " + model_ +
                  " --epochs 1 --frames 2 --semantic-init random --log " +
                  (dir_->path() / "log.jsonl").string()).code, 0);
  }
  static void TearDownTestSuite() { delete dir_; }
  static testing::TempDir* dir_;
  static std::string data_, model_;
};
testing::TempDir* Cli::dir_ = nullptr;
std::string Cli::data_, Cli::model_;

TEST_F(Cli, HelpListsSubcommandsAndFlags) {
  const auto top = run("--help");
  EXPECT_EQ(top.code, 0);
  for (const char* sub : {"gen-data", "extract-spectral", "train", "eval", "infer", "ablate",
                          "sweep-radius", "gate-maps", "bench"})
    EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
  const auto train = run("train --help");
  for (const char* flag : {"--manifest", "--variant", "--radius", "--epochs", "--lr", "--seed"})
    EXPECT_NE(train.out.find(flag), std::string::npos) << flag;
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("train --bogus").code, 1);
  EXPECT_EQ(run("eval --manifest " + data_ + " --model " + model_ + " --perturb sharpen:2").code, 1);
  EXPECT_EQ(run("eval --manifest /nonexistent --model " + model_).code, 2);
  EXPECT_EQ(run("gen-data --out " + data_).code, 2);  // non-empty without --force
}

TEST_F(Cli, GenDataIsByteReproducible) {
  const auto other = (dir_->path() / "data2").string();
  ASSERT_EQ(run("gen-data --out " + other + " --clips 2 --test-clips 2 --frames 2 --size 32 --seed 4").code, 0);
  EXPECT_EQ(slurp(other + "/manifest.json"), slurp(data_ + "/manifest.json"));
  for (const auto& e : std::filesystem::recursive_directory_iterator(data_)) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), data_);
    EXPECT_EQ(slurp(e.path()), slurp(other / rel)) << rel;
  }
}

TEST_F(Cli, TrainingIsByteReproducible) {
  const auto again = (dir_->path() / "m2.ckpt").string();
  ASSERT_EQ(run("train --manifest " + data_ + " --out " + again +
                " --epochs 1 --frames 2 --semantic-init random --log /dev/null").code, 0);
  EXPECT_EQ(slurp(again), slurp(model_));
  const auto log = slurp(dir_->path() / "log.jsonl");
  EXPECT_EQ(json::parse(log.substr(0, log.find('\n')))["epoch"], 1);
}

TEST_F(Cli, InferAgreesWithEval) {
  const auto json_path = (dir_->path() / "report.json").string();
  const auto ev = run("eval --manifest " + data_ + " --model " + model_ + " --json " + json_path);
  ASSERT_EQ(ev.code, 0);
  EXPECT_EQ(run("eval --manifest " + data_ + " --model " + model_).out, ev.out);
  const auto report = json::parse(slurp(json_path));
  const auto inf = run("infer --model " + model_ + " --manifest " + data_ + " --split test");
  ASSERT_EQ(inf.code, 0);
  std::map<std::string, double> by_id;
  std::istringstream lines(inf.out);
  std::string id;
  double p = 0.0;
  while (lines >> id >> p) by_id[id] = p;
  ASSERT_EQ(by_id.size(), report["scores"].size());
  for (const auto& s : report["scores"]) EXPECT_EQ(by_id.at(s["id"]), s["score"].get<double>());
  const auto one = run("infer --model " + model_ + " --clip " + data_ + "/test/fake_00000");
  EXPECT_EQ(one.code, 0);
  EXPECT_NE(one.out.find("fake_00000"), std::string::npos);
}

TEST_F(Cli, ExtractSpectralIsDeterministic) {
  const auto frame = data_ + "/test/fake_00000/frame_0000.ppm";
  const auto a = (dir_->path() / "r1.ppm").string(), b = (dir_->path() / "r2.ppm").string();
  const auto raw = (dir_->path() / "r.bin").string();
  ASSERT_EQ(run("extract-spectral --in " + frame + " --radius 4 --out " + a + " --raw " + raw).code, 0);
  ASSERT_EQ(run("extract-spectral --in " + frame + " --radius 4 --out " + b).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_GT(slurp(raw).size(), 32u * 32 * 3 * 8);
}

TEST_F(Cli, SweepReportsExactMaskFractions) {
  const auto out = (dir_->path() / "sweep.json").string();
  ASSERT_EQ(run("sweep-radius --radii 0,16,32 --test " + data_ + " --train-each --train " + data_ +
                " --epochs 1 --frames 2 --semantic-init random --json " + out).code, 0);
  EXPECT_EQ(run("sweep-radius --radii 0 --test " + data_ + " --models " + model_).code, 1);
  const auto j = json::parse(slurp(out));
  ASSERT_EQ(j["rows"].size(), 3u);
  for (const auto& row : j["rows"]) {
    const double r = row["radius"];
    const auto mask = spectral::working_mask(32, 32, spectral::radius_for_size(r, 32));
    EXPECT_EQ(row["masked_bins"].get<std::size_t>(), mask.masked_count());
    EXPECT_EQ(row["mask_fraction"].get<double>(),
              static_cast<double>(mask.masked_count()) / (32.0 * 32.0));
  }
}

TEST_F(Cli, GateMapsCoverTheFrame) {
  const auto out = (dir_->path() / "maps").string();
  ASSERT_EQ(run("gate-maps --clip " + data_ + "/test/fake_00001 --model " + model_ + " --out " + out).code, 0);
  const auto j = json::parse(slurp(out + "/gate_maps.json"));
  EXPECT_EQ(j["grid"].get<std::size_t>() * j["patch"].get<std::size_t>(), 32u);
  EXPECT_EQ(j["frames"].size(), 2u);
  const auto header = slurp(out + "/frame_0000_gate.ppm").substr(0, 8);
  EXPECT_EQ(header.substr(0, 2), "P6");
  EXPECT_NE(header.find("32 32"), std::string::npos);
}

TEST_F(Cli, BenchReportsAnalyticMacs) {
  const auto out = (dir_->path() / "bench.json").string();
  ASSERT_EQ(run("bench --preset desk --frames 2 --json " + out).code, 0);
  const auto j = json::parse(slurp(out));
  const auto cfg = training::config_from_json(j["config"].dump());
  const auto macs = training::analytic_macs(cfg);
  EXPECT_EQ(j["macs"]["per_frame"].get<std::uint64_t>(), macs.per_frame);
  EXPECT_EQ(j["macs"]["per_clip"].get<std::uint64_t>(), macs.per_clip);
  EXPECT_GT(j["fps"].get<double>(), 0.0);
}

}  // namespace
}  // namespace specsem
