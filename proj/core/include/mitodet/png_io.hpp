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

#pragma once

#include <filesystem>

#include "mitodet/image.hpp"

namespace mitodet {

/// Reads a PNG file as 8-bit RGB. Grayscale, palette and alpha images
/// are converted; 16-bit channels are reduced to 8. Throws IoError when
/// the file is missing or not a decodable PNG.
RgbImage read_png(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG with fixed encoder settings, so identical
/// pixels always produce identical bytes under the same build. The file
/// appears atomically (written to a temp name, then renamed).
void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace mitodet
