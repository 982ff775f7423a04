// include/chenone/error.h

// Copyright 2026  The chenone authors

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

#ifndef CHENONE_ERROR_H_
#define CHENONE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace chenone {

enum class ErrorCode {
  kEmptyAfterNormalization,
  kEmptyLexicon,
  kUnknownSymbol,
  kMalformedLine,
  kEmptyTranscript,
  kLengthMismatch,
  kDimMismatch,
  kZeroCount,
  kEmptyStats,
  kMissingRoot,
  kUnknownCenterUnit,
  kUtteranceTooShort,
  kNoPath,
  kMalformedArpa,
  kOrderMismatch,
  kNoHypothesis,
  kEmptyReference,
  kInvalidSpan,
  kEmptySegments,
  kMissingArtifact,
  kUnsupported,
  kInvalidArgument,
  kIo,
};

const char *ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception; the code is
// stable and the message carries file/line context where there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

namespace internal {

class ErrorBuilder {
 public:
  explicit ErrorBuilder(ErrorCode code) : code_(code) {}

  template <typename T>
  ErrorBuilder &operator<<(const T &value) {
    stream_ << value;
    return *this;
  }

  [[noreturn]] void Throw() const { throw Error(code_, stream_.str()); }

 private:
  ErrorCode code_;
  std::ostringstream stream_;
};

// Lets `CHENONE_ERR(kFoo) << "x=" << x;` throw at the end of the statement.
struct ErrorThrower {
  [[noreturn]] void operator=(const ErrorBuilder &builder) const {
    builder.Throw();
  }
};

}  // namespace internal

#define CHENONE_ERR(code)                        \
  ::chenone::internal::ErrorThrower() =          \
      ::chenone::internal::ErrorBuilder(::chenone::ErrorCode::code)

#define CHENONE_ASSERT(cond)                                               \
  do {                                                                     \
    if (!(cond))                                                           \
      CHENONE_ERR(kInvalidArgument)                                        \
          << "assertion failed: " #cond " (" << __FILE__ << ":" << __LINE__ \
          << ")";                                                          \
  } while (0)

}  // namespace chenone

#endif  // CHENONE_ERROR_H_
