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

#include "mvre/numerics/parameters.h"

#include <cmath>

#include "mvre/errors.h"

namespace mvre {

Parameter* ParameterStore::Add(std::string name, Matrix init) {
  if (index_.count(name) > 0) {
    throw ConfigError("duplicate parameter name: " + name);
  }
  index_.emplace(name, params_.size());
  params_.push_back(Parameter{std::move(name), std::move(init)});
  return &params_.back();
}

Parameter* ParameterStore::Find(std::string_view name) {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &params_[it->second];
}

const Parameter* ParameterStore::Find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &params_[it->second];
}

Parameter& ParameterStore::Get(std::string_view name) {
  Parameter* p = Find(name);
  if (p == nullptr) throw ConfigError("unknown parameter: " + std::string(name));
  return *p;
}

const Parameter& ParameterStore::Get(std::string_view name) const {
  const Parameter* p = Find(name);
  if (p == nullptr) throw ConfigError("unknown parameter: " + std::string(name));
  return *p;
}

std::vector<Parameter*> ParameterStore::All() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (auto& p : params_) out.push_back(&p);
  return out;
}

std::vector<const Parameter*> ParameterStore::All() const {
  std::vector<const Parameter*> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(&p);
  return out;
}

size_t ParameterStore::TotalValues() const {
  size_t n = 0;
  for (const auto& p : params_) n += static_cast<size_t>(p.value.size());
  return n;
}

void ParameterStore::CopyValuesFrom(const ParameterStore& other) {
  for (auto& p : params_) {
    const Parameter& src = other.Get(p.name);
    if (src.value.rows() != p.value.rows() ||
        src.value.cols() != p.value.cols()) {
      throw DimensionError("shape mismatch copying parameter " + p.name);
    }
    p.value = src.value;
  }
}

void GradientSet::Accumulate(const Parameter* param, const Matrix& grad) {
  auto it = index_.find(param);
  if (it == index_.end()) {
    index_.emplace(param, entries_.size());
    entries_.emplace_back(param, grad);
    return;
  }
  entries_[it->second].second += grad;
}

const Matrix* GradientSet::Find(const Parameter* param) const {
  auto it = index_.find(param);
  return it == index_.end() ? nullptr : &entries_[it->second].second;
}

double GradientSet::SquaredNorm() const {
  double total = 0.0;
  for (const auto& [param, grad] : entries_) total += grad.squaredNorm();
  return total;
}

void GradientSet::Scale(double factor) {
  for (auto& entry : entries_) entry.second *= factor;
}

double SgdStep(ParameterStore& store, const GradientSet& grads, double lr,
               double clip_norm) {
  const double norm = std::sqrt(grads.SquaredNorm());
  double scale = lr;
  if (clip_norm > 0.0 && norm > clip_norm) scale *= clip_norm / norm;
  for (Parameter* p : store.All()) {
    if (const Matrix* g = grads.Find(p)) p->value -= scale * (*g);
  }
  return norm;
}

}  // namespace mvre
