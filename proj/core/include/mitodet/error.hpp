// Copyright 2026 The mitodet Authors
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

namespace mitodet {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failure: missing file, unreadable image, failed write.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Structured input does not match its schema (manifest, config,
/// detection table). Messages carry file/line context where available.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Semantically invalid value or argument combination.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mitodet
