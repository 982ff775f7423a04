// include/chenone/text-utils.h

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

#ifndef CHENONE_TEXT_UTILS_H_
#define CHENONE_TEXT_UTILS_H_

#include <string>
#include <string_view>
#include <vector>

namespace chenone {

/// Invalid byte sequences decode to U+FFFD, one per offending byte.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(char32_t code_point);

std::string_view Trim(std::string_view text);
/// Splits on runs of spaces/tabs; no empty fields.
std::vector<std::string> SplitWhitespace(std::string_view text);
std::vector<std::string> Split(std::string_view text, char delim);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);

/// Shortest round-trip decimal form at 17 significant digits ("%.17g").
std::string FormatDouble(double value);
/// Parses the whole string as a double; false on trailing garbage.
bool ParseDouble(std::string_view text, double *value);
bool ParseInt(std::string_view text, long long *value);

}  // namespace chenone

#endif  // CHENONE_TEXT_UTILS_H_
