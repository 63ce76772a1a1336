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

#ifndef MVRE_NUMERICS_CHECKPOINT_H_
#define MVRE_NUMERICS_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mvre/numerics/parameters.h"

namespace mvre {

// Binary named-tensor container:
//
//   "MVRECKPT" | u32 version | u32 count |
//   count x ( u32 name_len | name | u32 rows | u32 cols | f64[rows*cols] )
//
// Integers and doubles are little-endian; tensor values are row-major. A
// save/load round trip is bit-exact.
inline constexpr uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  Matrix value;
};

void WriteCheckpoint(const std::string& path,
                     const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> ReadCheckpoint(const std::string& path);

void SaveParameters(const ParameterStore& store, const std::string& path);
// Every parameter in `store` must be present with the same shape; extra
// tensors in the file are an error too.
void LoadParameters(ParameterStore& store, const std::string& path);

}  // namespace mvre

#endif  // MVRE_NUMERICS_CHECKPOINT_H_
