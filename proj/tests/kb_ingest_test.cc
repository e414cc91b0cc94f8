#include "falcon/kb_ingest.h"

#include <gtest/gtest.h>
#include <zlib.h>

#include <json.hpp>
#include <set>

#include "falcon/error.h"
#include "falcon/text.h"
#include "test_support.h"

namespace falcon::kb {
namespace {

using testing::FixturePath;
using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

WikidataId Q(std::uint64_t n) { return WikidataId::Item(n); }
WikidataId P(std::uint64_t n) { return WikidataId::Property(n); }

// The record for `id` from the fixture dump, as the raw line.
std::string FixtureLine(std::string_view id) {
  const std::string dump = ReadFile(FixturePath("wikidata_fixture.json"));
  for (std::string_view line : text::Split(dump, '\n')) {
    std::string record = text::Trim(line);
    if (!record.empty() && record.back() == ',') record.pop_back();
    if (record.empty() || record[0] != '{') continue;
    if (nlohmann::json::parse(record).value("id", "") == id) return record;
  }
  ADD_FAILURE() << "no fixture record " << id;
  return {};
}

DumpRecord ParseFixture(std::string_view id) {
  ParsedLine parsed = ParseDumpRecord(FixtureLine(id));
  EXPECT_TRUE(std::holds_alternative<DumpRecord>(parsed)) << id;
  return std::get<DumpRecord>(parsed);
}

TEST(ParseDumpRecord, UnitedStatesAliases) {
  DumpRecord rec = ParseFixture("Q30");
  EXPECT_EQ(rec.id, Q(30));
  EXPECT_EQ(rec.kind, RecordKind::kEntity);
  EXPECT_EQ(rec.label_en, "United States of America");
  EXPECT_GE(rec.aliases_en.size(), 4u);
  for (const char *alias : {"America", "U.S.A.", "the U.S.", "United States"}) {
    EXPECT_NE(std::find(rec.aliases_en.begin(), rec.aliases_en.end(), alias),
              rec.aliases_en.end())
        << alias;
  }
}

TEST(ParseDumpRecord, SpouseProperty) {
  DumpRecord rec = ParseFixture("P26");
  EXPECT_EQ(rec.kind, RecordKind::kProperty);
  EXPECT_EQ(rec.label_en, "spouse");
  EXPECT_EQ(rec.aliases_en, (std::vector<std::string>{"husband", "wife", "married to",
                                                      "wedded to", "partner"}));
  EXPECT_EQ(rec.datatype, "wikibase-item");
}

TEST(ParseDumpRecord, StructuralLinesAreSkipped) {
  for (const char *line : {"[", "]", "[]", "", "  ", "],"}) {
    ParsedLine parsed = ParseDumpRecord(line);
    ASSERT_TRUE(std::holds_alternative<SkipMarker>(parsed)) << line;
    EXPECT_EQ(std::get<SkipMarker>(parsed).reason, SkipReason::kStructural);
  }
}

TEST(ParseDumpRecord, LexemesAndNonEnglishAreSkipped) {
  auto reason = [](std::string_view line) {
    return std::get<SkipMarker>(ParseDumpRecord(line)).reason;
  };
  EXPECT_EQ(reason(R"({"type":"lexeme","id":"L7","lemmas":{}},)"), SkipReason::kLexeme);
  EXPECT_EQ(reason(R"({"type":"item","id":"Q9","labels":{"de":{"language":"de","value":"x"}}})"),
            SkipReason::kNoEnglish);
  EXPECT_EQ(reason(R"({"type":"mediainfo","id":"M5","labels":{}})"),
            SkipReason::kOtherEntityType);
}

TEST(ParseDumpRecord, AliasOnlyRecordIsKept) {
  auto parsed = ParseDumpRecord(
      R"({"id":"Q5","labels":{},"aliases":{"en":[{"language":"en","value":"person"}]}})");
  ASSERT_TRUE(std::holds_alternative<DumpRecord>(parsed));
  EXPECT_FALSE(std::get<DumpRecord>(parsed).label_en);
  EXPECT_EQ(ExtractAlignments(std::get<DumpRecord>(parsed)).size(), 1u);
}

TEST(ParseDumpRecord, AliasesDedupedAfterCaseFolding) {
  auto parsed = ParseDumpRecord(
      R"({"id":"Q1","labels":{"en":{"value":"X"}},"aliases":{"en":[{"value":"USA"},{"value":"usa"},{"value":" Usa "},{"value":"U.S."}]}})");
  EXPECT_EQ(std::get<DumpRecord>(parsed).aliases_en,
            (std::vector<std::string>{"USA", "U.S."}));
}

TEST(ParseDumpRecord, MalformedLinesThrow) {
  EXPECT_THROW(ParseDumpRecord("{not json"), FormatError);
  EXPECT_THROW(ParseDumpRecord("[1, 2]"), FormatError);
  EXPECT_THROW(ParseDumpRecord(R"({"labels":{}})"), FormatError);
  EXPECT_THROW(ParseDumpRecord(R"({"id":"Qx1"})"), FormatError);
}

TEST(ExtractAlignments, LabelFirstThenAliases) {
  DumpRecord rec;
  rec.id = Q(30);
  rec.label_en = "United States of America";
  rec.aliases_en = {"America"};
  EXPECT_EQ(ExtractAlignments(rec),
            (std::vector<Alignment>{
                {Q(30), "United States of America", "United States of America"},
                {Q(30), "United States of America", "America"}}));
}

TEST(ExtractAlignments, LabelOnlyYieldsOne) {
  DumpRecord rec;
  rec.id = Q(1);
  rec.label_en = "universe";
  EXPECT_EQ(ExtractAlignments(rec).size(), 1u);
}

TEST(ExtractAlignments, SpouseHasSix) {
  EXPECT_EQ(ExtractAlignments(ParseFixture("P26")).size(), 6u);
}

TEST(ExtractTriples, ObamaSpouse) {
  std::vector<Triple> triples = ExtractTriples(ParseFixture("Q76"));
  EXPECT_NE(std::find(triples.begin(), triples.end(), Triple{Q(76), P(26), Q(13133)}),
            triples.end());
  // P569 is date-valued: literal sentinel object.
  EXPECT_NE(std::find(triples.begin(), triples.end(), Triple{Q(76), P(569), std::nullopt}),
            triples.end());
}

TEST(ExtractTriples, NoStatementsNoTriples) {
  DumpRecord rec;
  rec.id = Q(1);
  rec.label_en = "x";
  EXPECT_TRUE(ExtractTriples(rec).empty());
}

TEST(ExtractTriples, KeepsBestRankOnly) {
  // Q43274: P26 has a normal and a preferred statement; only the preferred
  // one is truthy.
  std::vector<Triple> triples = ExtractTriples(ParseFixture("Q43274"));
  std::vector<Triple> spouse;
  for (const Triple &t : triples) {
    if (t.p == P(26)) spouse.push_back(t);
  }
  EXPECT_EQ(spouse, (std::vector<Triple>{{Q(43274), P(26), Q(1000100)}}));
  // Q937: the only P27 statement is deprecated.
  for (const Triple &t : ExtractTriples(ParseFixture("Q937"))) EXPECT_NE(t.p, P(27));
}

TEST(ExtractTriples, DropsNoValueAndSomeValue) {
  EXPECT_TRUE(ExtractTriples(ParseFixture("Q1000102")).empty());
}

TEST(ClassifyPropertyRange, FromDatatypeAllowlistAndConstraint) {
  PlaceAllowlist allow = PlaceAllowlist::Default();
  EXPECT_EQ(ClassifyPropertyRange(ParseFixture("P570"), allow).range_class, RangeClass::kDate);
  EXPECT_EQ(ClassifyPropertyRange(ParseFixture("P26"), allow).range_class, RangeClass::kOther);
  EXPECT_EQ(ClassifyPropertyRange(ParseFixture("P20"), allow).range_class, RangeClass::kPlace);
  // P1427 is not allowlisted; its value-type constraint names a place class.
  EXPECT_EQ(ClassifyPropertyRange(ParseFixture("P1427"), allow).range_class,
            RangeClass::kPlace);
  PlaceAllowlist custom = PlaceAllowlist::Parse("# only spouse\nP26\n");
  EXPECT_EQ(ClassifyPropertyRange(ParseFixture("P26"), custom).range_class,
            RangeClass::kPlace);
  EXPECT_EQ(ClassifyPropertyRange(ParseFixture("P20"), custom).range_class,
            RangeClass::kOther);
}

// Independent tally over the raw JSON: label (or first alias) plus every
// alias that differs from it after case folding.
KbStats TallyDump(const std::filesystem::path &path) {
  KbStats stats;
  const std::string dump = ReadFile(path);
  for (std::string_view raw : text::Split(dump, '\n')) {
    std::string line = text::Trim(raw);
    if (!line.empty() && line.back() == ',') line.pop_back();
    if (line.empty() || line == "[" || line == "]") continue;
    auto j = nlohmann::json::parse(line);
    std::string id = j["id"];
    if (id[0] == 'L') {
      ++stats.records_skipped;
      continue;
    }
    std::vector<std::string> names;
    if (j["labels"].contains("en")) names.push_back(j["labels"]["en"]["value"]);
    if (j.contains("aliases") && j["aliases"].contains("en")) {
      for (auto &a : j["aliases"]["en"]) names.push_back(a["value"]);
    }
    std::set<std::string> folded;
    for (auto &n : names) folded.insert(text::ToLower(n));
    if (folded.empty()) {
      ++stats.records_skipped;
      continue;
    }
    (id[0] == 'P' ? stats.property_alignment_count : stats.entity_alignment_count) +=
        static_cast<std::int64_t>(folded.size());
  }
  return stats;
}

TEST(BuildKb, SmallDumpMatchesHandTally) {
  TempDir dir;
  KbStats stats = BuildKb(FixturePath("small_dump.json"), dir.path());
  KbStats tally = TallyDump(FixturePath("small_dump.json"));
  EXPECT_EQ(stats.entity_alignment_count, tally.entity_alignment_count);
  EXPECT_EQ(stats.property_alignment_count, tally.property_alignment_count);
  // Frozen: Q76 7 + Q30 7; P26 6 + P3362 2 + P2139 4; Q76 5 facts + Q30 3.
  EXPECT_EQ(stats, (KbStats{14, 12, 8, 0}));
  EXPECT_EQ(ReadStats(dir / kStatsFile), stats);
  EXPECT_EQ(ReadFile(dir / kPropertyMetaFile), "P26\tOTHER\nP3362\tOTHER\nP2139\tOTHER\n");
}

TEST(BuildKb, FixtureDumpMatchesTally) {
  TempDir dir;
  KbStats stats = BuildKb(FixturePath("wikidata_fixture.json"), dir.path());
  KbStats tally = TallyDump(FixturePath("wikidata_fixture.json"));
  EXPECT_EQ(stats.entity_alignment_count, tally.entity_alignment_count);
  EXPECT_EQ(stats.property_alignment_count, tally.property_alignment_count);
  EXPECT_EQ(stats.records_skipped, tally.records_skipped);
  // Sum of extracted alignments equals the two counts; each file holds only
  // its own kind and no empty alias.
  auto entities = ReadAlignments(dir / kEntityAlignmentsFile);
  auto properties = ReadAlignments(dir / kPropertyAlignmentsFile);
  EXPECT_EQ(static_cast<std::int64_t>(entities.size()), stats.entity_alignment_count);
  EXPECT_EQ(static_cast<std::int64_t>(properties.size()), stats.property_alignment_count);
  std::set<std::pair<WikidataId, std::string>> pairs;
  for (const auto &a : entities) {
    EXPECT_TRUE(a.iri.is_item());
    EXPECT_FALSE(text::Trim(a.alias).empty());
    EXPECT_TRUE(pairs.insert({a.iri, a.alias}).second) << a.alias;
  }
  std::set<WikidataId> property_ids;
  for (const auto &a : properties) {
    EXPECT_TRUE(a.iri.is_property());
    EXPECT_TRUE(pairs.insert({a.iri, a.alias}).second) << a.alias;
    property_ids.insert(a.iri);
  }
  // Meta rows cover exactly the property ids.
  std::set<WikidataId> meta_ids;
  const std::string meta = ReadFile(dir / kPropertyMetaFile);
  for (std::string_view line : text::Split(meta, '\n')) {
    if (line.empty()) continue;
    EXPECT_TRUE(meta_ids.insert(*WikidataId::Parse(text::Split(line, '\t')[0])).second);
  }
  EXPECT_EQ(meta_ids, property_ids);
}

TEST(BuildKb, EmptyDump) {
  TempDir dir;
  WriteFile(dir / "empty.json", "[]\n");
  EXPECT_EQ(BuildKb(dir / "empty.json", dir / "kb"), (KbStats{0, 0, 0, 0}));
  EXPECT_EQ(ReadFile(dir / "kb" / kTriplesFile), "");
}

TEST(BuildKb, MalformedAndDuplicateRecordsAreCounted) {
  TempDir dir;
  std::string q76 = FixtureLine("Q76");
  WriteFile(dir / "dump.json", "[\n" + q76 + "\n{broken,\n" + q76 + "\n]\n");
  KbStats stats = BuildKb(dir / "dump.json", dir / "kb");
  EXPECT_EQ(stats.entity_alignment_count, 7);
  EXPECT_EQ(stats.records_skipped, 2);
}

TEST(BuildKb, ByteIdenticalAcrossRunsAndModes) {
  TempDir dir;
  BuildOptions serial;
  serial.parallel = false;
  BuildOptions tiny_batches;
  tiny_batches.batch_lines = 3;
  BuildKb(FixturePath("wikidata_fixture.json"), dir / "a");
  BuildKb(FixturePath("wikidata_fixture.json"), dir / "b", serial);
  BuildKb(FixturePath("wikidata_fixture.json"), dir / "c", tiny_batches);
  for (std::string_view name : {kEntityAlignmentsFile, kPropertyAlignmentsFile,
                                kTriplesFile, kPropertyMetaFile, kStatsFile}) {
    std::string a = ReadFile(dir / "a" / name);
    EXPECT_EQ(a, ReadFile(dir / "b" / name)) << name;
    EXPECT_EQ(a, ReadFile(dir / "c" / name)) << name;
  }
}

TEST(BuildKb, ReadsGzip) {
  TempDir dir;
  std::string plain = ReadFile(FixturePath("small_dump.json"));
  gzFile gz = gzopen((dir / "dump.json.gz").c_str(), "wb");
  ASSERT_NE(gz, nullptr);
  gzwrite(gz, plain.data(), static_cast<unsigned>(plain.size()));
  gzclose(gz);
  EXPECT_EQ(BuildKb(dir / "dump.json.gz", dir / "kb"), (KbStats{14, 12, 8, 0}));
}

TEST(BuildKb, MissingDumpLeavesNoOutput) {
  TempDir dir;
  EXPECT_THROW(BuildKb(dir / "nope.json", dir / "kb"), IoError);
  EXPECT_FALSE(std::filesystem::exists(dir / "kb" / kEntityAlignmentsFile));
  EXPECT_FALSE(std::filesystem::exists(dir / "kb" / (std::string(kTriplesFile) + ".partial")));
}

TEST(ReadAlignments, RejectsBadRows) {
  TempDir dir;
  WriteFile(dir / "a.tsv", "Q1\tx\tx\nQ2\tonly two\n");
  try {
    ReadAlignments(dir / "a.tsv");
    FAIL();
  } catch (const FormatError &e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(FormatLines, Tsv) {
  EXPECT_EQ(FormatTriple({Q(76), P(569), std::nullopt}), "Q76\tP569\t__LIT__");
  EXPECT_EQ(FormatAlignment({Q(1), "a\tb", "c"}), "Q1\ta b\tc");
  EXPECT_EQ(FormatPropertyMeta({P(20), RangeClass::kPlace}), "P20\tPLACE");
}

}  // namespace
}  // namespace falcon::kb
