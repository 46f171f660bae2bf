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

#include <stdexcept>
#include <string>

namespace chronoless {

// Base class for domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Labeled-layout misuse: unknown or duplicate system ids, bad permutations.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// Normalization denominator of a composition vanished.
class NullComposition : public Error {
 public:
  explicit NullComposition(const std::string& what = "null event")
      : Error(what) {}
};

// Update kernel annihilated every outcome.
class NullUpdate : public Error {
 public:
  explicit NullUpdate(const std::string& what = "null update") : Error(what) {}
};

// Closed network whose total contraction is zero.
class IncompatibleNetwork : public Error {
 public:
  explicit IncompatibleNetwork(const std::string& what = "null event")
      : Error(what) {}
};

// Structural problems with a network: open ports, doubly wired ports,
// contractions beyond the supported size.
class NetworkError : public Error {
 public:
  using Error::Error;
};

}  // namespace chronoless
