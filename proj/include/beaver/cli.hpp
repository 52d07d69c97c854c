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

#ifndef BEAVER_CLI_HPP_
#define BEAVER_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "beaver/ahe.hpp"

namespace beaver::cli {

// Operator front end. Subcommands: keygen, triples, bench-enc, demo,
// verify, export-transcript. Settings come from (lowest to highest
// precedence) built-in defaults, a key=value config file (--config PATH
// or $BEAVER_FORGE_CONFIG), and command-line flags.
//
// Exit codes: 0 success, 2 parameter error, 3 protocol abort, 4 I/O
// error.

inline constexpr int kExitOk = 0;
inline constexpr int kExitParam = 2;
inline constexpr int kExitProtocol = 3;
inline constexpr int kExitIo = 4;

struct Config {
  uint32_t n = 16;
  uint64_t q = 140737488356903ULL;
  int64_t t = 32843;
  double sigma = 3.2;
  uint32_t tail_bound = 6;
  uint64_t parties = 3;
  uint64_t servers = 3;
  std::string seed_hex;  // empty draws one from the system entropy pool
  std::string out_dir = "out";

  // Validates and assembles scheme parameters; throws ParamError with the
  // violated constraint.
  ahe::AheParams ahe_params() const;

  // The configured seed, or a fresh system-entropy seed when unset.
  uint64_t resolve_seed() const;
};

// Full command-line entry point. JSON reports go to `out`, human-readable
// progress to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

// Convenience overload bound to stdout/stderr.
int run(int argc, const char* const* argv);

}  // namespace beaver::cli

#endif  // BEAVER_CLI_HPP_
