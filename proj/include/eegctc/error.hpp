// eegctc/error.hpp

// Copyright 2026  The eegctc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef EEGCTC_ERROR_HPP_
#define EEGCTC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace eegctc {

enum class ErrorKind {
  kConfig,       // invalid parameters, unknown hooks, charset mismatch
  kDesign,       // filter design out of range
  kDomain,       // argument outside a function's domain
  kShape,        // dimension mismatch
  kLength,       // sequence too short
  kLookup,       // unknown name
  kAlignment,    // feature streams cannot be aligned
  kData,         // degenerate or malformed data
  kRange,        // integer argument out of range
  kSplit,        // subject split does not partition the corpus
  kEvaluation,   // scoring inputs inconsistent
  kInfeasible,   // no CTC alignment exists
  kBudget,       // brute-force instance too large
  kTraining,     // nothing trainable
  kIo,           // filesystem / format failures
  kNumeric,      // NaN / Inf produced during computation
};

/// Every failure raised by the library carries a kind so that callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

/// 0 success, 1 user/config error, 2 I/O error, 3 numeric failure.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return 2;
    case ErrorKind::kNumeric:
      return 3;
    default:
      return 1;
  }
}

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kDesign: return "design error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kLength: return "length error";
    case ErrorKind::kLookup: return "lookup error";
    case ErrorKind::kAlignment: return "alignment error";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kRange: return "range error";
    case ErrorKind::kSplit: return "split error";
    case ErrorKind::kEvaluation: return "evaluation error";
    case ErrorKind::kInfeasible: return "infeasible-alignment error";
    case ErrorKind::kBudget: return "budget error";
    case ErrorKind::kTraining: return "training error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kNumeric: return "numeric failure";
  }
  return "error";
}

}  // namespace eegctc

#endif  // EEGCTC_ERROR_HPP_
