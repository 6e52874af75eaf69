// Copyright 2026 The VEAT Authors.
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

#include <iosfwd>

namespace veat::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;  // bad input, bad flags, degenerate data
inline constexpr int kIo = 2;          // missing or unwritable files

// Entry point for the `veat` binary. Results go to `out` (and to files under
// --output-dir); every diagnostic goes to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace veat::cli
