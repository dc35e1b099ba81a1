// Copyright 2026 The qrev Authors
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

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "qrev/core.hpp"

namespace qrev {

// One tensor factor of a composite Hilbert space.
struct Space {
  std::string label;
  Index dim = 0;

  friend bool operator==(const Space& a, const Space& b) {
    return a.label == b.label && a.dim == b.dim;
  }
};

// Ordered list of labeled tensor factors.  The composite index convention is
// row-major: the first-listed factor is the slowest index, so the flat index
// of (i_0, i_1, ..., i_{k-1}) is ((i_0 * d_1 + i_1) * d_2 + i_2) * ...
class SpaceLayout {
 public:
  SpaceLayout() = default;

  SpaceLayout(std::initializer_list<Space> factors)
      : factors_(factors) {
    validate();
  }

  explicit SpaceLayout(std::vector<Space> factors) : factors_(std::move(factors)) {
    validate();
  }

  static SpaceLayout single(std::string label, Index dim) {
    return SpaceLayout({Space{std::move(label), dim}});
  }

  Index total_dim() const {
    Index d = 1;
    for (const auto& f : factors_) d *= f.dim;
    return d;
  }

  Index num_factors() const { return static_cast<Index>(factors_.size()); }
  const Space& factor(Index i) const { return factors_.at(static_cast<size_t>(i)); }
  const std::vector<Space>& factors() const { return factors_; }

  std::optional<Index> find(const std::string& label) const {
    for (size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].label == label) return static_cast<Index>(i);
    }
    return std::nullopt;
  }

  bool contains(const std::string& label) const { return find(label).has_value(); }

  Index dim_of(const std::string& label) const {
    auto pos = find(label);
    require(pos.has_value(), "unknown space label '" + label + "'");
    return factors_[static_cast<size_t>(*pos)].dim;
  }

  // Layout with one labeled factor removed.
  SpaceLayout without(const std::string& label) const {
    auto pos = find(label);
    require(pos.has_value(), "unknown space label '" + label + "'");
    std::vector<Space> rest;
    for (size_t i = 0; i < factors_.size(); ++i) {
      if (static_cast<Index>(i) != *pos) rest.push_back(factors_[i]);
    }
    return SpaceLayout(std::move(rest));
  }

  // Concatenation; labels must stay unique.
  SpaceLayout joined(const SpaceLayout& other) const {
    std::vector<Space> all = factors_;
    for (const auto& f : other.factors_) all.push_back(f);
    return SpaceLayout(std::move(all));
  }

  std::string to_string() const {
    std::string s;
    for (size_t i = 0; i < factors_.size(); ++i) {
      if (i > 0) s += "*";
      s += factors_[i].label;
    }
    return s.empty() ? "(scalar)" : s;
  }

  friend bool operator==(const SpaceLayout& a, const SpaceLayout& b) {
    return a.factors_ == b.factors_;
  }

  // Decompose a flat index into per-factor indices.
  std::vector<Index> unravel(Index flat) const {
    std::vector<Index> idx(factors_.size());
    for (size_t i = factors_.size(); i-- > 0;) {
      idx[i] = flat % factors_[i].dim;
      flat /= factors_[i].dim;
    }
    return idx;
  }

  Index ravel(const std::vector<Index>& idx) const {
    Index flat = 0;
    for (size_t i = 0; i < factors_.size(); ++i) {
      flat = flat * factors_[i].dim + idx[i];
    }
    return flat;
  }

 private:
  void validate() const {
    for (size_t i = 0; i < factors_.size(); ++i) {
      require(factors_[i].dim >= 1, "space dimension must be >= 1");
      for (size_t j = i + 1; j < factors_.size(); ++j) {
        require(factors_[i].label != factors_[j].label,
                "duplicate space label '" + factors_[i].label + "'");
      }
    }
  }

  std::vector<Space> factors_;
};

}  // namespace qrev
