// Copyright 2026 The Beaver Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BEAVER_ERRORS_HPP_
#define BEAVER_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace beaver {

// Invalid or inconsistent parameters (moduli, degrees, share counts, config).
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A protocol rule was violated: out-of-order message, malformed payload,
// reused triple, missing share, depleted offline phase.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Channel-level failure on the simulated network. `timeout` marks a message
// that was expected but never delivered (e.g. injected drop).
class TransportError : public std::runtime_error {
 public:
  explicit TransportError(const std::string& what, bool timeout = false)
      : std::runtime_error(what), timeout_(timeout) {}
  bool timeout() const { return timeout_; }

 private:
  bool timeout_;
};

// File and serialization failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace beaver

#endif  // BEAVER_ERRORS_HPP_
