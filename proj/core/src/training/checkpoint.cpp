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

#include "specsem/training/checkpoint.hpp"

#include <cstdio>
#include <map>

#include "specsem/errors.hpp"
#include "specsem/io/binary.hpp"

namespace specsem::training {

namespace {

constexpr char kMagic[4] = {'S', 'S', 'N', 'W'};

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string encode_checkpoint(const Detector& detector) {
  std::string out(kMagic, 4);
  io::put_le<std::uint32_t>(out, kCheckpointVersion);
  const std::string cfg = config_to_json(detector.config());
  io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.size()));
  out += cfg;
  io::put_le<std::uint64_t>(out, config_hash(detector.config()));
  const auto params = detector.parameters();
  io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
    out += p.name;
    const auto& shape = p.tensor.shape();
    io::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(shape.size()));
    for (std::size_t d : shape) io::put_le<std::uint64_t>(out, d);
    for (double v : p.tensor.data()) io::put_le<float>(out, static_cast<float>(v));
  }
  return out;
}

Detector decode_checkpoint(const std::string& bytes,
                           std::optional<std::uint64_t> expected_hash) {
  io::ByteReader r(bytes, "checkpoint");
  if (r.get_bytes(4) != std::string(kMagic, 4)) {
    throw ParseError("checkpoint: bad magic at byte offset 0 (expected SSNW)");
  }
  const auto version = r.get_le<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw ParseError("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto cfg_len = r.get_le<std::uint32_t>();
  const DetectorConfig cfg = config_from_json(r.get_bytes(cfg_len));
  const auto stored = r.get_le<std::uint64_t>();
  const auto actual = config_hash(cfg);
  if (stored != actual) {
    throw ModelError("checkpoint config hash mismatch: stored " + hex(stored) +
                     ", config hashes to " + hex(actual));
  }
  if (expected_hash && *expected_hash != stored) {
    throw ModelError("checkpoint config hash " + hex(stored) +
                     " does not match the requested config " + hex(*expected_hash));
  }
  Detector detector(cfg);
  std::map<std::string, numerics::Tensor> by_name;
  for (const auto& p : detector.parameters()) by_name.emplace(p.name, p.tensor);

  const auto count = r.get_le<std::uint32_t>();
  if (count != by_name.size()) {
    throw ModelError("checkpoint holds " + std::to_string(count) + " tensors, model has " +
                     std::to_string(by_name.size()));
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = r.get_bytes(r.get_le<std::uint32_t>());
    const auto rank = r.get_le<std::uint32_t>();
    numerics::Shape shape;
    for (std::uint32_t d = 0; d < rank; ++d)
      shape.push_back(static_cast<std::size_t>(r.get_le<std::uint64_t>()));
    auto it = by_name.find(name);
    if (it == by_name.end()) throw ModelError("checkpoint tensor '" + name + "' is not in the model");
    if (it->second.shape() != shape) {
      throw ModelError("checkpoint tensor '" + name + "' has shape " +
                       numerics::shape_string(shape) + ", model expects " +
                       numerics::shape_string(it->second.shape()));
    }
    auto data = it->second.mutable_data();
    for (double& v : data) v = static_cast<double>(r.get_le<float>());
    by_name.erase(it);
  }
  if (!r.at_end()) {
    throw ParseError("checkpoint: trailing bytes at offset " + std::to_string(r.offset()));
  }
  return detector;
}

void save_checkpoint(const std::filesystem::path& path, const Detector& detector) {
  io::write_file(path, encode_checkpoint(detector));
}

Detector load_checkpoint(const std::filesystem::path& path,
                         std::optional<std::uint64_t> expected_hash) {
  if (!std::filesystem::exists(path)) {
    throw DataError("checkpoint '" + path.string() + "' not found");
  }
  return decode_checkpoint(io::read_file(path), expected_hash);
}

}  // namespace specsem::training
