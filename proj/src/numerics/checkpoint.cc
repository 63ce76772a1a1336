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

#include "mvre/numerics/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <set>

#include "mvre/errors.h"

namespace mvre {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'M', 'V', 'R', 'E', 'C', 'K', 'P', 'T'};

void PutU32(std::ostream& out, uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

uint32_t GetU32(std::istream& in, const std::string& path) {
  uint32_t v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw DataError("truncated checkpoint: " + path);
  }
  return v;
}

}  // namespace

void WriteCheckpoint(const std::string& path,
                     const std::vector<NamedTensor>& tensors) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  PutU32(out, kCheckpointVersion);
  PutU32(out, static_cast<uint32_t>(tensors.size()));
  std::vector<double> row_major;
  for (const auto& t : tensors) {
    PutU32(out, static_cast<uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    PutU32(out, static_cast<uint32_t>(t.value.rows()));
    PutU32(out, static_cast<uint32_t>(t.value.cols()));
    row_major.resize(static_cast<size_t>(t.value.size()));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>(row_major.data(), t.value.rows(),
                                               t.value.cols()) = t.value;
    out.write(reinterpret_cast<const char*>(row_major.data()),
              static_cast<std::streamsize>(row_major.size() * sizeof(double)));
  }
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

std::vector<NamedTensor> ReadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a checkpoint file: " + path);
  }
  const uint32_t version = GetU32(in, path);
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version) +
                    " in " + path);
  }
  const uint32_t count = GetU32(in, path);
  std::vector<NamedTensor> tensors;
  tensors.reserve(count);
  std::vector<double> row_major;
  for (uint32_t k = 0; k < count; ++k) {
    NamedTensor t;
    t.name.resize(GetU32(in, path));
    if (!in.read(t.name.data(), static_cast<std::streamsize>(t.name.size()))) {
      throw DataError("truncated checkpoint: " + path);
    }
    const uint32_t rows = GetU32(in, path);
    const uint32_t cols = GetU32(in, path);
    row_major.resize(static_cast<size_t>(rows) * cols);
    if (!in.read(reinterpret_cast<char*>(row_major.data()),
                 static_cast<std::streamsize>(row_major.size() * sizeof(double)))) {
      throw DataError("truncated checkpoint: " + path);
    }
    t.value = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>(row_major.data(), rows,
                                                         cols);
    tensors.push_back(std::move(t));
  }
  return tensors;
}

void SaveParameters(const ParameterStore& store, const std::string& path) {
  std::vector<NamedTensor> tensors;
  for (const Parameter* p : store.All()) tensors.push_back({p->name, p->value});
  WriteCheckpoint(path, tensors);
}

void LoadParameters(ParameterStore& store, const std::string& path) {
  std::vector<NamedTensor> tensors = ReadCheckpoint(path);
  std::set<std::string> seen;
  for (auto& t : tensors) {
    Parameter* p = store.Find(t.name);
    if (p == nullptr) {
      throw DataError("checkpoint " + path + " has unknown tensor " + t.name);
    }
    if (p->value.rows() != t.value.rows() || p->value.cols() != t.value.cols()) {
      throw DimensionError("checkpoint tensor " + t.name + " has shape " +
                           std::to_string(t.value.rows()) + "x" +
                           std::to_string(t.value.cols()) + ", model expects " +
                           std::to_string(p->value.rows()) + "x" +
                           std::to_string(p->value.cols()));
    }
    p->value = std::move(t.value);
    seen.insert(t.name);
  }
  for (const Parameter* p : store.All()) {
    if (seen.count(p->name) == 0) {
      throw DataError("checkpoint " + path + " is missing tensor " + p->name);
    }
  }
}

}  // namespace mvre
