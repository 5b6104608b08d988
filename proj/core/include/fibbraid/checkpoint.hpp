// Copyright 2026 The fibbraid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Network checkpoints: one JSON document
//
//   {"version": 1,
//    "spec": {"input_dim": 4, "hidden1": ..., "use_batchnorm": true, ...},
//    "parameters": {"fc1.weight": [[...], ...], "fc1.bias": [...], ...},
//    "running_stats": {"bn1.running_mean": [...], ...}}
//
// Matrices are nested row-major lists, vectors flat lists. Numbers are
// written in shortest round-trip decimal form, so reloading reproduces
// every binary64 value exactly.

#include <filesystem>
#include <string>

#include "fibbraid/network.hpp"

namespace fibbraid {

inline constexpr int kCheckpointVersion = 1;

std::string checkpoint_to_string(const MLPNetwork& net);
/// Throws CorruptCheckpoint on a version, key or shape mismatch.
MLPNetwork checkpoint_from_string(const std::string& text);

void save_checkpoint(const MLPNetwork& net, const std::filesystem::path& path);
MLPNetwork load_checkpoint(const std::filesystem::path& path);

}  // namespace fibbraid
