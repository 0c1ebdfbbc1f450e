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

#include "oracles.hpp"
#include "specsem/errors.hpp"
#include "specsem/io/binary.hpp"
#include "specsem/io/ppm.hpp"
#include "specsem/io/raw_grid.hpp"
#include "specsem/rng.hpp"

namespace specsem {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsDiffer) {
  Rng a(42, 0), b(42, 1);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, UniformAndBelowRanges) {
  Rng r(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(r.below(7), 7u);
  }
}

TEST(Rng, NormalMoments) {
  Rng r(9);
  double m = 0.0, v = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    m += x;
    v += x * x;
  }
  m /= n;
  EXPECT_NEAR(m, 0.0, 0.01);
  EXPECT_NEAR(v / n - m * m, 1.0, 0.02);
}

TEST(Rng, PermutationIsBijection) {
  Rng r(5);
  auto p = r.permutation(50);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
}

Image sample_image() {
  Image img(3, 5, 7);
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<double>(i % 256) / 255.0;
  return img;
}

TEST(Ppm, RoundTripIsExactForQuantisedImages) {
  const Image img = sample_image();
  const Image back = io::decode_ppm(io::encode_ppm(img));
  ASSERT_TRUE(back.same_extents(img));
  EXPECT_EQ(back.data, img.data);
}

TEST(Ppm, HeaderCommentsAndSixteenBit) {
  std::string bytes = "P6\n# comment\n2 1\n# another\n65535\n";
  const unsigned char px[] = {0xff, 0xff, 0, 0, 0x80, 0, 0, 0, 0, 0, 0xff, 0xff};
  bytes.append(reinterpret_cast<const char*>(px), sizeof px);
  const Image img = io::decode_ppm(bytes);
  EXPECT_EQ(img.width, 2u);
  EXPECT_EQ(img.at(0, 0, 0), 1.0);
  EXPECT_NEAR(img.at(2, 0, 0), 0x8000 / 65535.0, 1e-15);
  EXPECT_EQ(img.at(2, 0, 1), 1.0);
}

TEST(Ppm, MalformedInputNamesByteOffset) {
  try {
    io::decode_ppm("P6\n4 4\n255\nabc");
    FAIL() << "truncated pixel data accepted";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("byte offset"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::decode_ppm("P3\n1 1\n255\n0 0 0"), ParseError);
  EXPECT_THROW(io::decode_ppm("P6\n1 1\n70000\n"), ParseError);
  EXPECT_THROW(io::decode_ppm(""), ParseError);
}

TEST(Ppm, RescaleForViewSpansUnitRange) {
  Image img(1, 2, 2);
  img.data = {-3.0, 1.0, 5.0, 0.0};
  const Image v = io::rescale_for_view(img);
  EXPECT_EQ(v.data[0], 0.0);
  EXPECT_EQ(v.data[2], 1.0);
  Image flat(1, 2, 2, 0.7);
  for (double x : io::rescale_for_view(flat).data) EXPECT_EQ(x, 0.5);
}

TEST(RawGrid, RoundTripIsBitwise) {
  testing::TempDir dir("rawgrid");
  Image img(2, 3, 4);
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = std::sin(1.3 * i) * 1e-7;
  io::write_raw_grid(dir / "g.bin", img);
  EXPECT_TRUE(io::is_raw_grid(dir / "g.bin"));
  const Image back = io::read_raw_grid(dir / "g.bin");
  EXPECT_EQ(back.data, img.data);
  EXPECT_EQ(back.channels, 2u);
}

TEST(RawGrid, RejectsTrailingBytes) {
  testing::TempDir dir("rawgrid_trailing");
  io::write_raw_grid(dir / "g.bin", Image(1, 1, 1, 0.25));
  io::write_file(dir / "g.bin", io::read_file(dir / "g.bin") + "x");
  EXPECT_THROW(io::read_raw_grid(dir / "g.bin"), ParseError);
}

TEST(Quantize, MatchesPpmRoundTrip) {
  Image img(3, 4, 4);
  Rng r(1);
  for (auto& v : img.data) v = r.uniform(-0.1, 1.1);
  Image q = img;
  quantize_8bit(q);
  EXPECT_EQ(io::decode_ppm(io::encode_ppm(img)).data, q.data);
}

}  // namespace
}  // namespace specsem
