// Copyright 2026 The dpreplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPREPLAY_ERRORS_H_
#define DPREPLAY_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpreplay {

// Error categories; values match the C API status codes and the CLI
// exit codes (0 is success and never appears here).
enum class ErrorCode : int {
  kUsage = 1,     // bad argument, bad config, shape mismatch
  kData = 2,      // unreadable or malformed data / files
  kBudget = 3,    // privacy budget infeasible or exhausted
  kInternal = 4,  // invariant violation inside the library
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorCode::kUsage, what) {}
};

struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorCode::kData, what) {}
};

struct BudgetError : Error {
  explicit BudgetError(const std::string& what) : Error(ErrorCode::kBudget, what) {}
};

struct InternalError : Error {
  explicit InternalError(const std::string& what) : Error(ErrorCode::kInternal, what) {}
};

}  // namespace dpreplay

#endif  // DPREPLAY_ERRORS_H_
