// Copyright 2026 The fbsim Authors
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

#ifndef FBSIM_ERROR_H_
#define FBSIM_ERROR_H_

#include <stdexcept>
#include <string>

namespace fbsim {

// Bad user-supplied parameters. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Qubit indices or spans that do not fit the layout.
class LayoutError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Inconsistent Hamiltonian description.
class ModelError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A term kind that has no circuit (for example fermion two-body terms).
class UnsupportedError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Eigensolver failure, overflow and similar. Exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fbsim

#endif  // FBSIM_ERROR_H_
