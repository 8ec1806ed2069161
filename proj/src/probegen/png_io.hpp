// Copyright 2026 the sensorank authors
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

#include "probegen/scene.hpp"

namespace sensorank::probegen {

/// Writes 8-bit RGB PNG with only IHDR/IDAT/IEND chunks (byte-stable).
void write_png(const std::filesystem::path& path, const Image& image);

/// Reads any 8/16-bit PNG and converts it to 8-bit RGB (alpha dropped).
Image read_png(const std::filesystem::path& path);

}  // namespace sensorank::probegen
