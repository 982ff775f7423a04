// src/accent-fold.h

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

#ifndef CHENONE_ACCENT_FOLD_H_
#define CHENONE_ACCENT_FOLD_H_

#include <string_view>

namespace chenone {

// ASCII replacement for a code point. ASCII maps to itself; Latin-1
// Supplement and Latin Extended-A letters map to their unaccented form
// (possibly several letters, e.g. U+00DF -> "ss"); everything else maps to
// the empty string.
std::string_view FoldAccent(char32_t code_point, char *ascii_buf);

}  // namespace chenone

#endif  // CHENONE_ACCENT_FOLD_H_
