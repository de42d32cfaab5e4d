// Copyright 2026 The mitodet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mitodet/image.hpp"

#include <algorithm>
#include <cstring>

#include "mitodet/error.hpp"

namespace mitodet {

RgbImage RgbImage::zeros(int width, int height) {
  if (width < 1 || height < 1) throw ValidationError("RgbImage: dimensions must be >= 1");
  RgbImage img;
  img.width = width;
  img.height = height;
  img.data.assign(static_cast<std::size_t>(width) * height * 3, 0);
  return img;
}

RgbImage crop_padded(const RgbImage& src, int origin_x, int origin_y, int size) {
  if (size < 1) throw ValidationError("crop_padded: size must be >= 1");
  if (origin_x < 0 || origin_y < 0) throw ValidationError("crop_padded: origin must be non-negative");
  RgbImage out = RgbImage::zeros(size, size);
  const int copy_w = std::max(0, std::min(size, src.width - origin_x));
  const int copy_h = std::max(0, std::min(size, src.height - origin_y));
  for (int y = 0; y < copy_h; ++y) {
    const std::uint8_t* row = &src.data[((static_cast<std::size_t>(origin_y) + y) * src.width + origin_x) * 3];
    std::memcpy(&out.data[static_cast<std::size_t>(y) * size * 3], row, static_cast<std::size_t>(copy_w) * 3);
  }
  return out;
}

}  // namespace mitodet
