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

#include "specsem/image.hpp"

#include <algorithm>
#include <cmath>

namespace specsem {

void quantize_8bit(Image& image) {
  for (auto& v : image.data) {
    const long level = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
    v = static_cast<double>(level) / 255.0;
  }
}

}  // namespace specsem
