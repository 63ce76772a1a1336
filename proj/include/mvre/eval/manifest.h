// Copyright 2026 The MVRE Authors.
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


#ifndef MVRE_EVAL_MANIFEST_H_
#define MVRE_EVAL_MANIFEST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvre/eval/config.h"
#include "mvre/model/train.h"

namespace mvre {

// SHA-1 of "blob <size>\0<content>", as printed by `git hash-object`.
std::string GitBlobSha1(std::string_view content);
std::string GitBlobSha1File(const std::string& path);

// Every regular file under each input (files or directories), keyed by path;
// order is sorted by path.
nlohmann::json InputHashes(const std::vector<std::string>& inputs);

nlohmann::json RunManifest(const ExperimentConfig& config, uint64_t seed,
                           const std::vector<std::string>& inputs,
                           const std::vector<EpochLog>& logs);

void WriteJson(const std::string& path, const nlohmann::json& value);
nlohmann::json ReadJson(const std::string& path);

}  // namespace mvre

#endif  // MVRE_EVAL_MANIFEST_H_
