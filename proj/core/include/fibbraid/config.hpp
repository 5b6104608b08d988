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

// Text formats shared by the command-line tools.
//
// Config files are `key = value` lines; `#` starts a comment. Keys are the
// field names of TrainingConfig / NetworkSpec / SearchConfig plus a few
// run-level settings (output_dir, checkpoint_every, resume).
//
// Target specs for single-qubit gates:
//   I X Y Z H S T        named gate
//   random:<seed>        Haar-random SU(2)
//   word:<tokens>        braid word, e.g. word:s1 s2i s1
//   {"matrix": ...}      inline JSON, 2x2 nested [re, im]
//   <path>               file holding the JSON form
// Two-qubit specs accept I CNOT CZ SWAP CIX, random:<seed>, and 4x4 JSON.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "fibbraid/search.hpp"
#include "fibbraid/trainer.hpp"
#include "fibbraid/two_qubit.hpp"

namespace fibbraid {

using KeyValues = std::map<std::string, std::string>;

/// Throws ParseError on malformed lines or repeated keys.
KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);

struct TrainRunConfig {
  TrainingConfig training;
  std::string output_dir = "run";
  int checkpoint_every = 100;
  std::optional<std::string> resume;  // checkpoint to continue from
};

/// Unknown keys are errors.
TrainRunConfig train_run_config(const KeyValues& kv);
SearchConfig search_config(const KeyValues& kv, SearchConfig base = {});

Unitary2 parse_target(const std::string& spec, const GateSet& gates = fibonacci_gateset());
Unitary4 parse_target4(const std::string& spec);

}  // namespace fibbraid
