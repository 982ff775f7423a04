// src/units.cc

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

#include "chenone/units.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "accent-fold.h"
#include "chenone/error.h"
#include "chenone/text-utils.h"

namespace chenone {

const char *UnitKindName(UnitKind kind) {
  switch (kind) {
    case UnitKind::kGrapheme: return "grapheme";
    case UnitKind::kPhoneme: return "phoneme";
    case UnitKind::kSilence: return "silence";
    case UnitKind::kGarbage: return "garbage";
  }
  return "grapheme";
}

std::optional<UnitKind> ParseUnitKind(std::string_view name) {
  if (name == "grapheme") return UnitKind::kGrapheme;
  if (name == "phoneme") return UnitKind::kPhoneme;
  if (name == "silence") return UnitKind::kSilence;
  if (name == "garbage") return UnitKind::kGarbage;
  return std::nullopt;
}

const char *CaseModeName(CaseMode mode) {
  return mode == CaseMode::kLowercase ? "lowercase" : "preserve";
}

std::optional<CaseMode> ParseCaseMode(std::string_view name) {
  if (name == "lowercase") return CaseMode::kLowercase;
  if (name == "preserve") return CaseMode::kPreserve;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// UnitInventory

UnitInventory::UnitInventory(std::vector<Base> bases, UnitKind,
                             CaseMode case_mode)
    : case_mode_(case_mode) {
  for (auto &b : bases) {
    if (b.symbol == kSilenceSymbol || b.symbol == kGarbageSymbol) continue;
    if (b.symbol.empty())
      CHENONE_ERR(kInvalidArgument) << "empty unit symbol";
    if (b.symbol.find_first_of(" \t") != std::string::npos)
      CHENONE_ERR(kInvalidArgument) << "unit symbol contains whitespace: '"
                                    << b.symbol << "'";
    if (index_.count(b.symbol)) continue;
    if (case_mode_ == CaseMode::kLowercase && b.kind == UnitKind::kGrapheme &&
        std::any_of(b.symbol.begin(), b.symbol.end(),
                    [](char c) { return c >= 'A' && c <= 'Z'; }))
      continue;
    index_.emplace(b.symbol, static_cast<int32_t>(bases_.size()));
    bases_.push_back(std::move(b));
  }
}

UnitInventory UnitInventory::Graphemic(CaseMode case_mode) {
  std::vector<Base> bases;
  bases.push_back({"'", UnitKind::kGrapheme});
  bases.push_back({"-", UnitKind::kGrapheme});
  if (case_mode == CaseMode::kPreserve)
    for (char c = 'A'; c <= 'Z'; ++c)
      bases.push_back({std::string(1, c), UnitKind::kGrapheme});
  for (char c = 'a'; c <= 'z'; ++c)
    bases.push_back({std::string(1, c), UnitKind::kGrapheme});
  return UnitInventory(std::move(bases), UnitKind::kGrapheme, case_mode);
}

UnitInventory UnitInventory::FromSymbols(const std::vector<std::string> &symbols,
                                         UnitKind kind, CaseMode case_mode) {
  std::vector<Base> bases;
  for (const auto &s : symbols) bases.push_back({s, kind});
  return UnitInventory(std::move(bases), kind, case_mode);
}

UnitInventory UnitInventory::Read(std::istream &is, CaseMode case_mode) {
  std::vector<Base> bases;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view body = Trim(line);
    if (body.empty() || body[0] == '#') continue;
    std::vector<std::string> fields = SplitWhitespace(body);
    if (fields.size() > 2)
      CHENONE_ERR(kMalformedLine) << "inventory line " << line_no << ": '"
                                  << line << "'";
    UnitKind kind = UnitKind::kPhoneme;
    if (fields.size() == 2) {
      std::optional<UnitKind> parsed;
      if (fields[1].rfind("kind=", 0) == 0)
        parsed = ParseUnitKind(std::string_view(fields[1]).substr(5));
      if (!parsed)
        CHENONE_ERR(kMalformedLine) << "inventory line " << line_no
                                    << ": bad annotation '" << fields[1] << "'";
      kind = *parsed;
    }
    bool special = fields[0] == kSilenceSymbol || fields[0] == kGarbageSymbol;
    if (!special &&
        (kind == UnitKind::kSilence || kind == UnitKind::kGarbage))
      CHENONE_ERR(kMalformedLine)
          << "inventory line " << line_no << ": only " << kSilenceSymbol
          << " and " << kGarbageSymbol << " may be special";
    if (special) continue;
    bases.push_back({fields[0], kind});
  }
  return UnitInventory(std::move(bases), UnitKind::kPhoneme, case_mode);
}

UnitInventory UnitInventory::ReadFile(const std::string &path,
                                      CaseMode case_mode) {
  std::ifstream is(path);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open inventory " << path;
  return Read(is, case_mode);
}

void UnitInventory::Write(std::ostream &os) const {
  os << kSilenceSymbol << " kind=silence\n";
  os << kGarbageSymbol << " kind=garbage\n";
  for (const auto &b : bases_)
    os << b.symbol << " kind=" << UnitKindName(b.kind) << "\n";
}

Unit UnitInventory::GetUnit(UnitId id) const {
  CHENONE_ASSERT(IsValid(id));
  if (id == kSilence) return {kSilenceSymbol, Position::kInternal, UnitKind::kSilence};
  if (id == kGarbage) return {kGarbageSymbol, Position::kInternal, UnitKind::kGarbage};
  const Base &b = bases_[BaseOf(id)];
  return {b.symbol, PositionOf(id), b.kind};
}

std::optional<int32_t> UnitInventory::FindBase(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string UnitInventory::UnitName(UnitId id) const {
  CHENONE_ASSERT(IsValid(id));
  if (id == kSilence) return kSilenceSymbol;
  if (id == kGarbage) return kGarbageSymbol;
  std::string name = bases_[BaseOf(id)].symbol;
  if (PositionOf(id) == Position::kWordBoundary) name += kBoundarySuffix;
  return name;
}

std::optional<UnitId> UnitInventory::ParseUnitName(std::string_view name) const {
  if (name == kSilenceSymbol) return kSilence;
  if (name == kGarbageSymbol) return kGarbage;
  Position pos = Position::kInternal;
  std::string_view suffix(kBoundarySuffix);
  if (name.size() > suffix.size() &&
      name.substr(name.size() - suffix.size()) == suffix &&
      !FindBase(name)) {
    name.remove_suffix(suffix.size());
    pos = Position::kWordBoundary;
  }
  auto base = FindBase(name);
  if (!base) return std::nullopt;
  return MakeUnit(*base, pos);
}

bool UnitInventory::operator==(const UnitInventory &other) const {
  if (case_mode_ != other.case_mode_ || bases_.size() != other.bases_.size())
    return false;
  for (size_t i = 0; i < bases_.size(); ++i)
    if (bases_[i].symbol != other.bases_[i].symbol ||
        bases_[i].kind != other.bases_[i].kind)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

// Normalized graphemes (as base indices) of `word`.
std::vector<int32_t> NormalizedBases(std::string_view word,
                                     const UnitInventory &inventory,
                                     std::string *normalized) {
  std::string_view trimmed = Trim(word);
  std::vector<int32_t> bases;
  char buf[4];
  for (char32_t cp : DecodeUtf8(trimmed)) {
    for (char c : FoldAccent(cp, buf)) {
      if (inventory.case_mode() == CaseMode::kLowercase && c >= 'A' && c <= 'Z')
        c = static_cast<char>(c - 'A' + 'a');
      auto base = inventory.FindBase(std::string_view(&c, 1));
      if (!base || inventory.BaseKind(*base) != UnitKind::kGrapheme) continue;
      bases.push_back(*base);
      if (normalized) normalized->push_back(c);
    }
  }
  if (bases.empty())
    CHENONE_ERR(kEmptyAfterNormalization)
        << "no grapheme survives in '" << std::string(word) << "'";
  return bases;
}

}  // namespace

std::string NormalizeWord(std::string_view word, const UnitInventory &inventory) {
  std::string normalized;
  NormalizedBases(word, inventory, &normalized);
  return normalized;
}

Pronunciation MarkWordBoundaries(const Pronunciation &units) {
  Pronunciation out(units.size());
  for (size_t i = 0; i < units.size(); ++i) {
    UnitId u = units[i];
    if (UnitInventory::IsSpecial(u)) {
      out[i] = u;
      continue;
    }
    bool boundary = (i == 0 || i + 1 == units.size());
    out[i] = UnitInventory::MakeUnit(
        UnitInventory::BaseOf(u),
        boundary ? Position::kWordBoundary : Position::kInternal);
  }
  return out;
}

std::vector<UnitId> WordToUnits(std::string_view word,
                                const UnitInventory &inventory) {
  std::vector<int32_t> bases = NormalizedBases(word, inventory, nullptr);
  Pronunciation units;
  units.reserve(bases.size());
  for (int32_t b : bases)
    units.push_back(UnitInventory::MakeUnit(b, Position::kInternal));
  return MarkWordBoundaries(units);
}

// ---------------------------------------------------------------------------
// Lexicon

std::optional<int32_t> Lexicon::FindWord(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Pronunciation> *Lexicon::Find(std::string_view word) const {
  auto i = FindWord(word);
  return i ? &prons_[*i] : nullptr;
}

void Lexicon::Add(const std::string &word, const Pronunciation &pron) {
  CHENONE_ASSERT(!pron.empty());
  auto it = index_.find(word);
  if (it == index_.end()) {
    index_.emplace(word, NumWords());
    words_.push_back(word);
    prons_.push_back({pron});
    return;
  }
  auto &prons = prons_[it->second];
  if (std::find(prons.begin(), prons.end(), pron) == prons.end())
    prons.push_back(pron);
}

void Lexicon::Write(std::ostream &os, const UnitInventory &inventory) const {
  for (int32_t i = 0; i < NumWords(); ++i) {
    for (const auto &pron : prons_[i]) {
      os << words_[i] << '\t';
      for (size_t k = 0; k < pron.size(); ++k) {
        if (k > 0) os << ' ';
        os << inventory.UnitName(pron[k]);
      }
      os << '\n';
    }
  }
}

Lexicon BuildLexicon(const std::vector<std::string> &words,
                     const UnitInventory &inventory,
                     std::vector<std::string> *skipped) {
  Lexicon lexicon(LexiconSource::kGraphemic);
  for (const auto &raw : words) {
    std::string word(Trim(raw));
    if (word.empty()) continue;
    if (lexicon.FindWord(word)) continue;
    try {
      lexicon.Add(word, WordToUnits(word, inventory));
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kEmptyAfterNormalization) throw;
      if (skipped) skipped->push_back(word);
    }
  }
  if (lexicon.empty())
    CHENONE_ERR(kEmptyLexicon) << "no word of " << words.size()
                               << " produced a lexicon entry";
  return lexicon;
}

Lexicon ReadLexicon(std::istream &is, const UnitInventory &inventory,
                    LexiconSource source) {
  Lexicon lexicon(source);
  std::string line;
  int64_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      CHENONE_ERR(kMalformedLine) << "lexicon line " << line_no
                                  << ": missing TAB: '" << line << "'";
    std::string word(Trim(std::string_view(line).substr(0, tab)));
    std::vector<std::string> symbols =
        SplitWhitespace(std::string_view(line).substr(tab + 1));
    if (word.empty() || symbols.empty())
      CHENONE_ERR(kMalformedLine) << "lexicon line " << line_no << ": '"
                                  << line << "'";
    Pronunciation pron;
    for (const auto &sym : symbols) {
      auto unit = inventory.ParseUnitName(sym);
      if (!unit || UnitInventory::IsSpecial(*unit))
        CHENONE_ERR(kUnknownSymbol) << "lexicon line " << line_no
                                    << ": symbol '" << sym << "'";
      pron.push_back(UnitInventory::Internal(*unit));
    }
    pron = MarkWordBoundaries(pron);
    const auto *existing = lexicon.Find(word);
    if (source == LexiconSource::kGraphemic && existing &&
        (*existing)[0] != pron)
      CHENONE_ERR(kMalformedLine) << "lexicon line " << line_no
                                  << ": second pronunciation for graphemic"
                                     " entry '" << word << "'";
    lexicon.Add(word, pron);
  }
  return lexicon;
}

Lexicon ReadLexiconFile(const std::string &path, const UnitInventory &inventory,
                        LexiconSource source) {
  std::ifstream is(path);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open lexicon " << path;
  return ReadLexicon(is, inventory, source);
}

Lexicon LoadPhoneticLexicon(const std::string &path,
                            const UnitInventory &inventory) {
  return ReadLexiconFile(path, inventory, LexiconSource::kPhonetic);
}

}  // namespace chenone
