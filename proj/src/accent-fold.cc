// src/accent-fold.cc

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

#include "accent-fold.h"

namespace chenone {

namespace {

// U+00C0 .. U+00FF
constexpr const char *kLatin1[64] = {
    "A", "A", "A", "A", "A",  "A", "AE", "C",  // C0-C7
    "E", "E", "E", "E", "I",  "I", "I",  "I",  // C8-CF
    "D", "N", "O", "O", "O",  "O", "O",  "",   // D0-D7 (D7 multiplication sign)
    "O", "U", "U", "U", "U",  "Y", "TH", "ss", // D8-DF
    "a", "a", "a", "a", "a",  "a", "ae", "c",  // E0-E7
    "e", "e", "e", "e", "i",  "i", "i",  "i",  // E8-EF
    "d", "n", "o", "o", "o",  "o", "o",  "",   // F0-F7 (F7 division sign)
    "o", "u", "u", "u", "u",  "y", "th", "y",  // F8-FF
};

// U+0100 .. U+017F
constexpr const char *kLatinExtendedA[128] = {
    "A",  "a",  "A", "a", "A", "a", "C", "c",  // 0100
    "C",  "c",  "C", "c", "C", "c", "D", "d",  // 0108
    "D",  "d",  "E", "e", "E", "e", "E", "e",  // 0110
    "E",  "e",  "E", "e", "G", "g", "G", "g",  // 0118
    "G",  "g",  "G", "g", "H", "h", "H", "h",  // 0120
    "I",  "i",  "I", "i", "I", "i", "I", "i",  // 0128
    "I",  "i",  "IJ", "ij", "J", "j", "K", "k",  // 0130
    "k",  "L",  "l", "L", "l", "L", "l", "L",  // 0138
    "l",  "L",  "l", "N", "n", "N", "n", "N",  // 0140
    "n",  "'n", "NG", "ng", "O", "o", "O", "o",  // 0148
    "O",  "o",  "OE", "oe", "R", "r", "R", "r",  // 0150
    "R",  "r",  "S", "s", "S", "s", "S", "s",  // 0158
    "S",  "s",  "T", "t", "T", "t", "T", "t",  // 0160
    "U",  "u",  "U", "u", "U", "u", "U", "u",  // 0168
    "U",  "u",  "U", "u", "W", "w", "Y", "y",  // 0170
    "Y",  "Z",  "z", "Z", "z", "Z", "z", "s",  // 0178
};

}  // namespace

std::string_view FoldAccent(char32_t cp, char *ascii_buf) {
  if (cp < 0x80) {
    ascii_buf[0] = static_cast<char>(cp);
    return std::string_view(ascii_buf, 1);
  }
  if (cp >= 0xC0 && cp <= 0xFF) return kLatin1[cp - 0xC0];
  if (cp >= 0x100 && cp <= 0x17F) return kLatinExtendedA[cp - 0x100];
  // Typographic apostrophes and hyphens.
  if (cp == 0x2018 || cp == 0x2019) return "'";
  if (cp == 0x2010 || cp == 0x2011) return "-";
  return {};
}

}  // namespace chenone
