// include/chenone/units.h

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

#ifndef CHENONE_UNITS_H_
#define CHENONE_UNITS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chenone {

using UnitId = int32_t;

enum class Position { kWordBoundary, kInternal };
enum class UnitKind { kGrapheme, kPhoneme, kSilence, kGarbage };
enum class CaseMode { kPreserve, kLowercase };

const char *UnitKindName(UnitKind kind);
std::optional<UnitKind> ParseUnitKind(std::string_view name);
const char *CaseModeName(CaseMode mode);
std::optional<CaseMode> ParseCaseMode(std::string_view name);

struct Unit {
  std::string symbol;
  Position position = Position::kInternal;
  UnitKind kind = UnitKind::kGrapheme;
};

/// Dense, stable numbering of acoustic units.
///
/// Unit 0 is SIL and unit 1 is GARBAGE. Every other "base" symbol b
/// (graphemes or phones, numbered from 0 in declaration order) owns two
/// units: 2 + 2b is its word-internal variant and 3 + 2b its word-boundary
/// (`_WB`) variant. Silence and garbage have no position variants.
class UnitInventory {
 public:
  static constexpr UnitId kSilence = 0;
  static constexpr UnitId kGarbage = 1;
  static constexpr const char *kSilenceSymbol = "SIL";
  static constexpr const char *kGarbageSymbol = "GARBAGE";
  static constexpr const char *kBoundarySuffix = "_WB";

  UnitInventory() : UnitInventory({}, UnitKind::kGrapheme, CaseMode::kPreserve) {}

  /// The 26 English letters (upper and lower case unless `case_mode` is
  /// kLowercase) plus hyphen and apostrophe, in byte order.
  static UnitInventory Graphemic(CaseMode case_mode = CaseMode::kPreserve);

  /// Builds an inventory from base symbols that all share `kind`.
  /// SIL/GARBAGE entries in `symbols` are skipped (they always exist).
  static UnitInventory FromSymbols(const std::vector<std::string> &symbols,
                                   UnitKind kind, CaseMode case_mode);

  /// Inventory file: one symbol per line, optionally followed by
  /// `kind=grapheme|phoneme|silence|garbage` (default phoneme). Lines starting
  /// with '#' and blank lines are ignored.
  static UnitInventory Read(std::istream &is, CaseMode case_mode);
  static UnitInventory ReadFile(const std::string &path, CaseMode case_mode);
  void Write(std::ostream &os) const;

  CaseMode case_mode() const { return case_mode_; }
  int32_t NumUnits() const { return 2 + 2 * NumBases(); }
  int32_t NumBases() const { return static_cast<int32_t>(bases_.size()); }

  Unit GetUnit(UnitId id) const;
  const std::string &BaseSymbol(int32_t base) const { return bases_[base].symbol; }
  UnitKind BaseKind(int32_t base) const { return bases_[base].kind; }
  std::optional<int32_t> FindBase(std::string_view symbol) const;

  static bool IsSpecial(UnitId id) { return id == kSilence || id == kGarbage; }
  /// Base index of a non-special unit; -1 for SIL/GARBAGE.
  static int32_t BaseOf(UnitId id) { return IsSpecial(id) ? -1 : (id - 2) / 2; }
  static Position PositionOf(UnitId id) {
    return (!IsSpecial(id) && (id - 2) % 2 == 1) ? Position::kWordBoundary
                                                 : Position::kInternal;
  }
  static UnitId MakeUnit(int32_t base, Position position) {
    return 2 + 2 * base + (position == Position::kWordBoundary ? 1 : 0);
  }
  /// The word-internal variant; identity for SIL/GARBAGE.
  static UnitId Internal(UnitId id) {
    return IsSpecial(id) ? id : MakeUnit(BaseOf(id), Position::kInternal);
  }

  bool IsValid(UnitId id) const { return id >= 0 && id < NumUnits(); }
  /// "h", "h_WB", "SIL", "GARBAGE".
  std::string UnitName(UnitId id) const;
  std::optional<UnitId> ParseUnitName(std::string_view name) const;

  bool operator==(const UnitInventory &other) const;

 private:
  struct Base {
    std::string symbol;
    UnitKind kind;
  };

  UnitInventory(std::vector<Base> bases, UnitKind default_kind, CaseMode case_mode);

  std::vector<Base> bases_;
  std::unordered_map<std::string, int32_t> index_;
  CaseMode case_mode_;
};

/// Folds accents (Latin-1 and Latin Extended-A to ASCII), drops characters
/// outside the inventory's grapheme set and lower-cases when the inventory
/// is in kLowercase mode. Throws kEmptyAfterNormalization when nothing
/// survives.
std::string NormalizeWord(std::string_view word, const UnitInventory &inventory);

/// One unit per surviving grapheme; the first and last carry the
/// word-boundary position (a one-grapheme word gets a single WB unit).
std::vector<UnitId> WordToUnits(std::string_view word,
                                const UnitInventory &inventory);

using Pronunciation = std::vector<UnitId>;

enum class LexiconSource { kGraphemic, kPhonetic };

/// Word -> pronunciations, kept in first-insertion order so that
/// serialization is deterministic.
class Lexicon {
 public:
  explicit Lexicon(LexiconSource source = LexiconSource::kGraphemic)
      : source_(source) {}

  LexiconSource source() const { return source_; }
  int32_t NumWords() const { return static_cast<int32_t>(words_.size()); }
  const std::string &Word(int32_t i) const { return words_[i]; }
  const std::vector<Pronunciation> &Pronunciations(int32_t i) const {
    return prons_[i];
  }
  std::optional<int32_t> FindWord(std::string_view word) const;
  /// nullptr when the word is absent.
  const std::vector<Pronunciation> *Find(std::string_view word) const;
  bool empty() const { return words_.empty(); }

  /// Adds a pronunciation; duplicates of an existing one are ignored.
  void Add(const std::string &word, const Pronunciation &pron);

  /// `word<TAB>unit unit ...`, one line per pronunciation.
  void Write(std::ostream &os, const UnitInventory &inventory) const;

 private:
  LexiconSource source_;
  std::vector<std::string> words_;
  std::vector<std::vector<Pronunciation>> prons_;
  std::unordered_map<std::string, int32_t> index_;
};

/// Builds a graphemic lexicon. Words that normalize to nothing are skipped
/// and appended to `skipped` when it is non-null; throws kEmptyLexicon when
/// no entry results.
Lexicon BuildLexicon(const std::vector<std::string> &words,
                     const UnitInventory &inventory,
                     std::vector<std::string> *skipped = nullptr);

/// Reads the lexicon text format. `_WB` suffixes in the file are accepted and
/// re-derived from position, so graphemic files round-trip and phonetic
/// dictionaries may be written without them.
Lexicon ReadLexicon(std::istream &is, const UnitInventory &inventory,
                    LexiconSource source);
Lexicon LoadPhoneticLexicon(const std::string &path,
                            const UnitInventory &inventory);
Lexicon ReadLexiconFile(const std::string &path, const UnitInventory &inventory,
                        LexiconSource source);

/// Applies the WB rule to a sequence of base-variant units.
Pronunciation MarkWordBoundaries(const Pronunciation &units);

}  // namespace chenone

#endif  // CHENONE_UNITS_H_
