// src/error.cc

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

#include "chenone/error.h"

namespace chenone {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyAfterNormalization: return "EmptyAfterNormalization";
    case ErrorCode::kEmptyLexicon: return "EmptyLexicon";
    case ErrorCode::kUnknownSymbol: return "UnknownSymbol";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kEmptyTranscript: return "EmptyTranscript";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kZeroCount: return "ZeroCount";
    case ErrorCode::kEmptyStats: return "EmptyStats";
    case ErrorCode::kMissingRoot: return "MissingRoot";
    case ErrorCode::kUnknownCenterUnit: return "UnknownCenterUnit";
    case ErrorCode::kUtteranceTooShort: return "UtteranceTooShort";
    case ErrorCode::kNoPath: return "NoPath";
    case ErrorCode::kMalformedArpa: return "MalformedArpa";
    case ErrorCode::kOrderMismatch: return "OrderMismatch";
    case ErrorCode::kNoHypothesis: return "NoHypothesis";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kInvalidSpan: return "InvalidSpan";
    case ErrorCode::kEmptySegments: return "EmptySegments";
    case ErrorCode::kMissingArtifact: return "MissingArtifact";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace chenone
