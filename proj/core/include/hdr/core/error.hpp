// Copyright 2026 The HDR Authors.
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

namespace hdr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on argument values was violated (non-finite pixels,
/// threshold out of range, non-binary target, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Two rasters or tensors that must agree in shape do not.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// The requested hand has an empty amodal mask; callers skip that hand.
class HandAbsent : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdr
