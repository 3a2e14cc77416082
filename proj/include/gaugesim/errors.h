// Copyright 2026 The gaugesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAUGESIM_ERRORS_H_
#define GAUGESIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace gaugesim {

/// Invalid or inconsistent user-supplied configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A request exceeds a hard resource cap (CLI exit code 3).
class ResourceError : public std::length_error {
 public:
  explicit ResourceError(const std::string& what) : std::length_error(what) {}
};

/// An iterative numerical routine failed to reach its tolerance.
class ToleranceError : public std::runtime_error {
 public:
  explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gaugesim

#endif  // GAUGESIM_ERRORS_H_
