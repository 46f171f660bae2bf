// Copyright 2026 The Chronoless Authors
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

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chronoless {

struct System {
  std::string id;
  std::size_t dim = 1;

  friend bool operator==(const System&, const System&) = default;
};

// Ordered tensor factors annotating the rows (and columns) of a square
// operator. The empty layout describes the trivial one-dimensional system.
class IndexLayout {
 public:
  IndexLayout() = default;
  IndexLayout(std::initializer_list<System> systems);
  explicit IndexLayout(std::vector<System> systems);

  std::size_t size() const { return systems_.size(); }
  bool empty() const { return systems_.empty(); }
  const System& operator[](std::size_t k) const { return systems_[k]; }
  auto begin() const { return systems_.begin(); }
  auto end() const { return systems_.end(); }
  const std::vector<System>& systems() const { return systems_; }

  // Product of all dims; 1 for the empty layout.
  std::size_t dim() const;
  std::vector<std::size_t> dims() const;
  std::vector<std::string> ids() const;

  std::optional<std::size_t> find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id).has_value(); }
  // Throws LayoutError for unknown ids.
  std::size_t index_of(const std::string& id) const;
  std::size_t dim_of(const std::string& id) const;

  IndexLayout concat(const IndexLayout& other) const;
  IndexLayout without(std::span<const std::string> ids) const;
  IndexLayout permuted(std::span<const std::size_t> order) const;
  IndexLayout renamed(const std::string& prefix) const;

  friend bool operator==(const IndexLayout&, const IndexLayout&) = default;

 private:
  void check_unique() const;
  std::vector<System> systems_;
};

// Throws LayoutError unless `order` is a permutation of 0..n-1.
void check_permutation(std::span<const std::size_t> order, std::size_t n);

// For new basis index r, the old basis index after reordering factors so
// that new factor k is old factor order[k].
std::vector<std::size_t> permutation_indices(const IndexLayout& layout,
                                             std::span<const std::size_t> order);

}  // namespace chronoless
