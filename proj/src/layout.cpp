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

#include "chronoless/layout.hpp"

#include <algorithm>
#include <set>

#include "chronoless/errors.hpp"

namespace chronoless {

IndexLayout::IndexLayout(std::initializer_list<System> systems)
    : systems_(systems) {
  check_unique();
}

IndexLayout::IndexLayout(std::vector<System> systems)
    : systems_(std::move(systems)) {
  check_unique();
}

void IndexLayout::check_unique() const {
  std::set<std::string> seen;
  for (const auto& s : systems_) {
    if (s.dim == 0) throw LayoutError("system '" + s.id + "' has dimension 0");
    if (!seen.insert(s.id).second)
      throw LayoutError("duplicate system id '" + s.id + "'");
  }
}

std::size_t IndexLayout::dim() const {
  std::size_t d = 1;
  for (const auto& s : systems_) d *= s.dim;
  return d;
}

std::vector<std::size_t> IndexLayout::dims() const {
  std::vector<std::size_t> out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(s.dim);
  return out;
}

std::vector<std::string> IndexLayout::ids() const {
  std::vector<std::string> out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(s.id);
  return out;
}

std::optional<std::size_t> IndexLayout::find(const std::string& id) const {
  for (std::size_t k = 0; k < systems_.size(); ++k)
    if (systems_[k].id == id) return k;
  return std::nullopt;
}

std::size_t IndexLayout::index_of(const std::string& id) const {
  auto k = find(id);
  if (!k) throw LayoutError("unknown system id '" + id + "'");
  return *k;
}

std::size_t IndexLayout::dim_of(const std::string& id) const {
  return systems_[index_of(id)].dim;
}

IndexLayout IndexLayout::concat(const IndexLayout& other) const {
  std::vector<System> all = systems_;
  all.insert(all.end(), other.systems_.begin(), other.systems_.end());
  return IndexLayout(std::move(all));
}

IndexLayout IndexLayout::without(std::span<const std::string> ids) const {
  for (const auto& id : ids) index_of(id);
  std::vector<System> kept;
  for (const auto& s : systems_)
    if (std::find(ids.begin(), ids.end(), s.id) == ids.end()) kept.push_back(s);
  return IndexLayout(std::move(kept));
}

IndexLayout IndexLayout::permuted(std::span<const std::size_t> order) const {
  check_permutation(order, systems_.size());
  std::vector<System> out;
  out.reserve(order.size());
  for (auto k : order) out.push_back(systems_[k]);
  return IndexLayout(std::move(out));
}

IndexLayout IndexLayout::renamed(const std::string& prefix) const {
  std::vector<System> out = systems_;
  for (auto& s : out) s.id = prefix + s.id;
  return IndexLayout(std::move(out));
}

void check_permutation(std::span<const std::size_t> order, std::size_t n) {
  if (order.size() != n) throw LayoutError("permutation has wrong length");
  std::vector<bool> hit(n, false);
  for (auto k : order) {
    if (k >= n || hit[k]) throw LayoutError("invalid permutation");
    hit[k] = true;
  }
}

std::vector<std::size_t> permutation_indices(const IndexLayout& layout,
                                             std::span<const std::size_t> order) {
  check_permutation(order, layout.size());
  const std::size_t n = layout.size();
  std::vector<std::size_t> old_stride(n, 1);
  for (std::size_t k = n; k-- > 1;)
    old_stride[k - 1] = old_stride[k] * layout[k].dim;

  const std::size_t total = layout.dim();
  std::vector<std::size_t> out(total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t r = 0; r < total; ++r) {
    std::size_t old = 0;
    for (std::size_t k = 0; k < n; ++k) old += digit[k] * old_stride[order[k]];
    out[r] = old;
    // Increment the new-layout digits, last factor fastest.
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < layout[order[k]].dim) break;
      digit[k] = 0;
    }
  }
  return out;
}

}  // namespace chronoless
