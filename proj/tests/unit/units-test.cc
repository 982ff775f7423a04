// tests/unit/units-test.cc

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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "chenone/units.h"
#include "test-util.h"

namespace chenone {
namespace {

using testing::ThrownCode;

std::vector<std::string> Names(const std::vector<UnitId> &ids, const UnitInventory &inv) {
  std::vector<std::string> out;
  for (UnitId id : ids) out.push_back(inv.UnitName(id));
  return out;
}

std::string LexiconText(const Lexicon &lex, const UnitInventory &inv) {
  std::ostringstream os;
  lex.Write(os, inv);
  return os.str();
}

std::string TempPath(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / "chenone-units-test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

TEST(NormalizeWord, DropsCharactersOutsideTheSet) {
  auto inv = UnitInventory::Graphemic();
  EXPECT_EQ(NormalizeWord("D.N.N.", inv), "DNN");
  EXPECT_EQ(NormalizeWord("Ritz-Carlton", inv), "Ritz-Carlton");
  EXPECT_EQ(NormalizeWord("Michael's", inv), "Michael's");
  EXPECT_EQ(NormalizeWord("  hello  ", inv), "hello");
  EXPECT_EQ(NormalizeWord("route66", inv), "route");
}

TEST(NormalizeWord, FoldsAccents) {
  auto inv = UnitInventory::Graphemic();
  EXPECT_EQ(NormalizeWord("naïve", inv), "naive");
  EXPECT_EQ(NormalizeWord("Ångström", inv), "Angstrom");
  EXPECT_EQ(NormalizeWord("straße", inv), "strasse");
  EXPECT_EQ(NormalizeWord("señor", inv), "senor");
  EXPECT_EQ(NormalizeWord("Łódź", inv), "Lodz");
}

TEST(NormalizeWord, LowercaseMode) {
  auto inv = UnitInventory::Graphemic(CaseMode::kLowercase);
  EXPECT_EQ(NormalizeWord("D.N.N.", inv), "dnn");
  EXPECT_EQ(NormalizeWord("Éclair", inv), "eclair");
}

TEST(NormalizeWord, EmptyResultIsAnError) {
  auto inv = UnitInventory::Graphemic();
  EXPECT_EQ(ThrownCode([&] { NormalizeWord("...", inv); }), ErrorCode::kEmptyAfterNormalization);
  EXPECT_EQ(ThrownCode([&] { NormalizeWord("   ", inv); }), ErrorCode::kEmptyAfterNormalization);
  EXPECT_EQ(ThrownCode([&] { NormalizeWord("42", inv); }), ErrorCode::kEmptyAfterNormalization);
}

TEST(WordToUnits, BoundaryTags) {
  auto inv = UnitInventory::Graphemic();
  using V = std::vector<std::string>;
  EXPECT_EQ(Names(WordToUnits("hello", inv), inv), (V{"h_WB", "e", "l", "l", "o_WB"}));
  EXPECT_EQ(Names(WordToUnits("Michael's", inv), inv),
            (V{"M_WB", "i", "c", "h", "a", "e", "l", "'", "s_WB"}));
  EXPECT_EQ(Names(WordToUnits("Ritz-Carlton", inv), inv),
            (V{"R_WB", "i", "t", "z", "-", "C", "a", "r", "l", "t", "o", "n_WB"}));
  EXPECT_EQ(Names(WordToUnits("I", inv), inv), (V{"I_WB"}));
  EXPECT_EQ(Names(WordToUnits("ab", inv), inv), (V{"a_WB", "b_WB"}));
  EXPECT_EQ(ThrownCode([&] { WordToUnits("...", inv); }), ErrorCode::kEmptyAfterNormalization);
}

TEST(UnitInventory, DenseIds) {
  auto inv = UnitInventory::Graphemic();
  EXPECT_EQ(inv.UnitName(UnitInventory::kSilence), "SIL");
  EXPECT_EQ(inv.UnitName(UnitInventory::kGarbage), "GARBAGE");
  // 26 lower, 26 upper, hyphen, apostrophe
  EXPECT_EQ(inv.NumBases(), 54);
  EXPECT_EQ(inv.NumUnits(), 2 + 2 * 54);
  for (UnitId id = 0; id < inv.NumUnits(); ++id) {
    auto parsed = inv.ParseUnitName(inv.UnitName(id));
    ASSERT_TRUE(parsed.has_value()) << inv.UnitName(id);
    EXPECT_EQ(*parsed, id);
  }
  auto lower = UnitInventory::Graphemic(CaseMode::kLowercase);
  EXPECT_EQ(lower.NumBases(), 28);
  for (int32_t b = 0; b < lower.NumBases(); ++b)
    for (char c : lower.BaseSymbol(b)) EXPECT_FALSE(c >= 'A' && c <= 'Z');
}

TEST(UnitInventory, FileRoundTrip) {
  std::istringstream is("# phones\nK\nAE kind=phoneme\nT\nSIL kind=silence\n");
  auto inv = UnitInventory::Read(is, CaseMode::kPreserve);
  EXPECT_EQ(inv.NumBases(), 3);
  std::ostringstream os;
  inv.Write(os);
  std::istringstream again(os.str());
  EXPECT_TRUE(UnitInventory::Read(again, CaseMode::kPreserve) == inv);
  std::istringstream bad("K kind=vowel\n");
  EXPECT_EQ(ThrownCode([&] { UnitInventory::Read(bad, CaseMode::kPreserve); }),
            ErrorCode::kMalformedLine);
}

TEST(BuildLexicon, Collisions) {
  auto inv = UnitInventory::Graphemic();
  Lexicon lex = BuildLexicon({"hello", "DNN", "D.N.N."}, inv);
  EXPECT_EQ(lex.NumWords(), 3);
  std::set<Pronunciation> distinct;
  for (int32_t i = 0; i < lex.NumWords(); ++i) {
    ASSERT_EQ(lex.Pronunciations(i).size(), 1u);
    distinct.insert(lex.Pronunciations(i)[0]);
  }
  EXPECT_EQ(distinct.size(), 2u);
}

TEST(BuildLexicon, GoldenEntries) {
  auto inv = UnitInventory::Graphemic();
  Lexicon lex = BuildLexicon({"hello", "Michael's", "Ritz-Carlton", "DNN", "D.N.N.", "naïve"}, inv);
  EXPECT_EQ(LexiconText(lex, inv),
            "hello\th_WB e l l o_WB\n"
            "Michael's\tM_WB i c h a e l ' s_WB\n"
            "Ritz-Carlton\tR_WB i t z - C a r l t o n_WB\n"
            "DNN\tD_WB N N_WB\n"
            "D.N.N.\tD_WB N N_WB\n"
            "naïve\tn_WB a i v e_WB\n");
}

TEST(BuildLexicon, SkipsEmptyWordsAndFailsWhenNothingRemains) {
  auto inv = UnitInventory::Graphemic();
  std::vector<std::string> skipped;
  Lexicon lex = BuildLexicon({"...", "ok", "!!"}, inv, &skipped);
  EXPECT_EQ(lex.NumWords(), 1);
  EXPECT_EQ(skipped, (std::vector<std::string>{"...", "!!"}));
  EXPECT_EQ(ThrownCode([&] { BuildLexicon({}, inv); }), ErrorCode::kEmptyLexicon);
  EXPECT_EQ(ThrownCode([&] { BuildLexicon({"..."}, inv); }), ErrorCode::kEmptyLexicon);
}

TEST(BuildLexicon, Deterministic) {
  auto inv = UnitInventory::Graphemic();
  std::vector<std::string> words{"zeta", "Alpha", "beta-2", "o'neil", "zeta"};
  EXPECT_EQ(LexiconText(BuildLexicon(words, inv), inv), LexiconText(BuildLexicon(words, inv), inv));
}

TEST(BuildLexicon, ReadBackIsIdentical) {
  auto inv = UnitInventory::Graphemic();
  Lexicon lex = BuildLexicon({"hello", "Michael's", "I", "naïve"}, inv);
  std::istringstream is(LexiconText(lex, inv));
  Lexicon again = ReadLexicon(is, inv, LexiconSource::kGraphemic);
  EXPECT_EQ(LexiconText(again, inv), LexiconText(lex, inv));
}

TEST(PhoneticLexicon, Loads) {
  std::string inv_path = TempPath("phones.txt");
  std::ofstream(inv_path) << "K\nAE\nT\nR\nIY\nEH\nD\n";
  auto inv = UnitInventory::ReadFile(inv_path, CaseMode::kPreserve);
  std::string lex_path = TempPath("lexicon.txt");
  std::ofstream(lex_path) << "# comment\ncat\tK AE T\nread\tR IY D\nread\tR EH D\n";
  Lexicon lex = LoadPhoneticLexicon(lex_path, inv);
  ASSERT_EQ(lex.NumWords(), 2);
  using V = std::vector<std::string>;
  EXPECT_EQ(Names((*lex.Find("cat"))[0], inv), (V{"K_WB", "AE", "T_WB"}));
  ASSERT_EQ(lex.Find("read")->size(), 2u);
  EXPECT_EQ(Names((*lex.Find("read"))[1], inv), (V{"R_WB", "EH", "D_WB"}));
  EXPECT_EQ(lex.source(), LexiconSource::kPhonetic);
}

TEST(PhoneticLexicon, Errors) {
  std::istringstream inv_is("K\nAE\nT\n");
  auto inv = UnitInventory::Read(inv_is, CaseMode::kPreserve);
  std::istringstream unknown("cat\tK QQ T\n");
  EXPECT_EQ(ThrownCode([&] { ReadLexicon(unknown, inv, LexiconSource::kPhonetic); }),
            ErrorCode::kUnknownSymbol);
  std::istringstream malformed("cat K AE T\n");
  EXPECT_EQ(ThrownCode([&] { ReadLexicon(malformed, inv, LexiconSource::kPhonetic); }),
            ErrorCode::kMalformedLine);
  EXPECT_EQ(ThrownCode([&] { LoadPhoneticLexicon("/nonexistent/lexicon.txt", inv); }),
            ErrorCode::kMissingArtifact);
}

// Random words over letters, punctuation, digits and accented letters.
std::string RandomWord(std::mt19937_64 &rng) {
  static const std::vector<std::string> pieces = [] {
    std::vector<std::string> p;
    for (char c = 'a'; c <= 'z'; ++c) p.emplace_back(1, c);
    for (char c = 'A'; c <= 'Z'; ++c) p.emplace_back(1, c);
    for (const char *s : {"-", "'", ".", "!", "3", "é", "Ö", "ñ", "ß", "ø", "Ł", "ç", "€"})
      p.emplace_back(s);
    return p;
  }();
  std::uniform_int_distribution<size_t> len(1, 10), pick(0, pieces.size() - 1);
  std::string w;
  for (size_t n = len(rng); n > 0; --n) w += pieces[pick(rng)];
  return w;
}

TEST(WordToUnits, RoundTripAndIdempotence) {
  std::mt19937_64 rng(11);
  for (CaseMode mode : {CaseMode::kPreserve, CaseMode::kLowercase}) {
    auto inv = UnitInventory::Graphemic(mode);
    for (int i = 0; i < 10000; ++i) {
      std::string w = RandomWord(rng);
      std::string norm;
      try {
        norm = NormalizeWord(w, inv);
      } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::kEmptyAfterNormalization);
        continue;
      }
      EXPECT_EQ(NormalizeWord(norm, inv), norm);
      auto units = WordToUnits(w, inv);
      std::string spelled;
      for (size_t k = 0; k < units.size(); ++k) {
        Unit u = inv.GetUnit(units[k]);
        spelled += u.symbol;
        bool edge = k == 0 || k + 1 == units.size();
        EXPECT_EQ(u.position == Position::kWordBoundary, edge);
      }
      EXPECT_EQ(spelled, norm);
    }
  }
}

}  // namespace
}  // namespace chenone
