#include "falcon/pipeline.h"

#include <gtest/gtest.h>

#include <random>

#include "falcon/error.h"
#include "falcon/text.h"

namespace falcon::pipeline {
namespace {

const LexiconTagger &Tagger() { return LexiconTagger::Default(); }

std::string Tags(std::string_view sentence) {
  std::string out;
  for (const TaggedToken &t : Tagger().Tag(sentence)) {
    if (!out.empty()) out += ' ';
    out += t.word + "/" + std::string(PosName(t.pos));
  }
  return out;
}

std::vector<std::string> Texts(const std::vector<SurfaceForm> &forms) {
  std::vector<std::string> out;
  for (const SurfaceForm &f : forms) out.push_back(f.text);
  return out;
}

std::vector<SurfaceForm> Compound(std::string_view sentence) {
  auto tagged = Tagger().Tag(sentence);
  return TokenizeCompound(tagged);
}

std::vector<SurfaceForm> Tile(std::string_view sentence) {
  auto tagged = Tagger().Tag(sentence);
  return NgramTile(TokenizeCompound(tagged), tagged);
}

using Strings = std::vector<std::string>;

TEST(PosTag, OperatingIncomeQuestion) {
  EXPECT_EQ(Tags("What is the operating income for Qantas"),
            "What/QWORD is/STOP the/STOP operating/NOUN income/NOUN for/STOP Qantas/PROPN");
}

TEST(PosTag, EmptyAndSingleVerb) {
  EXPECT_TRUE(Tagger().Tag("").empty());
  EXPECT_TRUE(Tagger().Tag("   ").empty());
  EXPECT_EQ(Tags("die"), "die/VERB");
}

TEST(PosTag, QuestionWords) {
  for (const char *q : {"who", "What", "WHEN", "where", "which", "how"}) {
    auto tagged = Tagger().Tag(q);
    ASSERT_EQ(tagged.size(), 1u);
    EXPECT_EQ(tagged[0].pos, Pos::kQword) << q;
  }
}

TEST(PosTag, SuffixRules) {
  EXPECT_EQ(Tags("died opened married founding quickly"),
            "died/VERB opened/VERB married/VERB founding/VERB quickly/ADV");
  EXPECT_EQ(Tags("wives states"), "wives/PROPN states/NOUN");
}

TEST(PosTag, CapitalizationOnlyMattersForUnknownWords) {
  EXPECT_EQ(Tags("the Lamb and the lamb"), "the/STOP Lamb/NOUN and/STOP the/STOP lamb/NOUN");
  EXPECT_EQ(Tags("is Charles born"), "is/STOP Charles/PROPN born/VERB");
  // Without case information the same words get the same tags.
  EXPECT_EQ(Tags("WHEN DID ANNIE OPEN"), "WHEN/QWORD DID/STOP ANNIE/PROPN OPEN/VERB");
}

TEST(PosTag, PunctuationAndPossessives) {
  EXPECT_EQ(Tags("Who is Obama's wife?"), "Who/QWORD is/STOP Obama/PROPN wife/NOUN");
  EXPECT_EQ(Tags("what , is"), "what/QWORD ,/OTHER is/STOP");
  EXPECT_EQ(Tags("\"Qantas\""), "Qantas/PROPN");
}

TEST(PosTag, SpansMatchInput) {
  std::string input = "  Who is the wife  of Barack Obama's?  ";
  std::size_t last_end = 0;
  for (const TaggedToken &t : Tagger().Tag(input)) {
    EXPECT_EQ(input.substr(t.begin, t.end - t.begin), t.word);
    EXPECT_GE(t.begin, last_end);
    EXPECT_LT(t.begin, t.end);
    last_end = t.end;
  }
}

TEST(PosTag, CustomLexicon) {
  LexiconTagger tagger("the\n", "# comment\nzorp\tVERB\n");
  auto tagged = tagger.Tag("the zorp");
  ASSERT_EQ(tagged.size(), 2u);
  EXPECT_EQ(tagged[0].pos, Pos::kStop);
  EXPECT_EQ(tagged[1].pos, Pos::kVerb);
  EXPECT_THROW(LexiconTagger("", "word\tNOPE\n"), FormatError);
  EXPECT_THROW(LexiconTagger("", "no tab here\n"), FormatError);
}

TEST(TokenizeCompound, OperatingIncomeQuestion) {
  EXPECT_EQ(Texts(Compound("What is the operating income for Qantas")),
            (Strings{"operating", "income", "Qantas"}));
}

TEST(TokenizeCompound, WifeOfBarackObama) {
  auto forms = Compound("who is the wife of barack obama");
  EXPECT_EQ(Texts(forms), (Strings{"wife", "barack obama"}));
  EXPECT_EQ(forms[0].hint, Hint::kRelationish);
  EXPECT_EQ(forms[1].hint, Hint::kEntityish);
}

TEST(TokenizeCompound, AllStopwords) {
  EXPECT_TRUE(Compound("who is it that was there").empty());
}

TEST(TokenizeCompound, VerbsStandAlone) {
  auto forms = Compound("When did Princess Diana die?");
  EXPECT_EQ(Texts(forms), (Strings{"Princess", "Diana", "die"}));
  EXPECT_EQ(forms[2].hint, Hint::kRelationish);
}

TEST(NgramTile, OperatingIncomeQuestion) {
  auto forms = Tile("What is the operating income for Qantas");
  EXPECT_EQ(Texts(forms), (Strings{"operating income", "Qantas"}));
  EXPECT_EQ(forms[0].hint, Hint::kRelationish);
  EXPECT_EQ(forms[1].hint, Hint::kEntityish);
  EXPECT_EQ(FormatForms(forms), "[operating income, Qantas]");
}

TEST(NgramTile, SingleFormsUnchanged) {
  EXPECT_EQ(Texts(Tile("Qantas")), (Strings{"Qantas"}));
  EXPECT_EQ(Texts(Tile("barack obama")), (Strings{"barack obama"}));
}

TEST(NgramTile, StopwordsBetweenNamesMerge) {
  EXPECT_EQ(Texts(Tile("Who was the Duke of Wellington")), (Strings{"Duke Wellington"}));
  // Mixed proper/common across a stopword stays apart; verbs never merge.
  EXPECT_EQ(Texts(Tile("the capital of France")), (Strings{"capital", "France"}));
  EXPECT_EQ(Texts(Tile("when did Princess Diana die")), (Strings{"Princess Diana", "die"}));
}

TEST(NgramSplit, Examples) {
  auto tagged = Tagger().Tag("operating income");
  auto halves = NgramSplit(MakeForm(tagged));
  ASSERT_TRUE(halves);
  EXPECT_EQ(halves->first.text, "operating");
  EXPECT_EQ(halves->second.text, "income");
  EXPECT_FALSE(NgramSplit(MakeForm(Tagger().Tag("Qantas"))));
  halves = NgramSplit(MakeForm(Tagger().Tag("barack hussein obama")));
  ASSERT_TRUE(halves);
  EXPECT_EQ(halves->first.text, "barack hussein");
  EXPECT_EQ(halves->second.text, "obama");
}

// Random sentences over a mixed vocabulary for the structural invariants.
std::string RandomSentence(std::mt19937 &rng) {
  static const char *kWords[] = {"the",   "of",    "who",     "is",     "Barack", "obama",
                                 "wife",  "died",  "capital", "France", "for",    "and",
                                 "open",  "?",     "lamb",    "Qantas", "when",   "red",
                                 "quickly", "U.S.", "global-warming", "2017", "ID", "did"};
  std::uniform_int_distribution<int> word(0, 23), len(0, 14);
  std::string s;
  for (int n = len(rng); n > 0; --n) {
    if (!s.empty()) s += ' ';
    s += kWords[word(rng)];
  }
  return s;
}

TEST(PipelineProperty, StructuralInvariants) {
  std::mt19937 rng(42);
  for (int i = 0; i < 2000; ++i) {
    std::string sentence = RandomSentence(rng);
    auto tagged = Tagger().Tag(sentence);
    auto compound = TokenizeCompound(tagged);
    auto tiled = NgramTile(compound, tagged);
    EXPECT_EQ(NgramTile(tiled, tagged), tiled) << sentence;
    for (const auto *forms : {&compound, &tiled}) {
      std::size_t last_end = 0;
      for (const SurfaceForm &f : *forms) {
        ASSERT_FALSE(f.tokens.empty());
        EXPECT_NE(f.tokens.front().pos, Pos::kStop) << sentence;
        EXPECT_NE(f.tokens.back().pos, Pos::kStop) << sentence;
        if (f.hint == Hint::kEntityish) {
          EXPECT_FALSE(f.has_verb()) << sentence;
        }
        if (f.has_verb()) {
          EXPECT_EQ(f.tokens.size(), 1u) << sentence;
        }
        EXPECT_GE(f.begin(), last_end) << sentence;
        EXPECT_LE(f.end(), sentence.size());
        last_end = f.end();
      }
    }
    for (const SurfaceForm &f : tiled) {
      SurfaceForm rest = f;
      std::size_t steps = 0;
      while (auto halves = NgramSplit(rest)) {
        rest = halves->first;
        ++steps;
      }
      EXPECT_EQ(steps, f.tokens.size() - 1);
    }
  }
}

}  // namespace
}  // namespace falcon::pipeline
