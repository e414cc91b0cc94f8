#ifndef FALCON_KB_INGEST_H_
#define FALCON_KB_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "falcon/triple.h"
#include "falcon/wikidata_id.h"

// Conversion of a Wikidata JSON dump into the background knowledge files:
// alias alignments, truthy triples and property range metadata.
namespace falcon {
namespace kb {

enum class RecordKind { kEntity, kProperty };

enum class StatementRank { kPreferred, kNormal, kDeprecated };
enum class SnakType { kValue, kSomeValue, kNoValue };

// The part of a statement the ingester keeps. A kValue snak without an item is
// a literal (time, quantity, string, coordinates, non-item entity).
struct Statement {
  WikidataId property;
  StatementRank rank = StatementRank::kNormal;
  SnakType snak = SnakType::kValue;
  std::optional<WikidataId> item;
};

struct DumpRecord {
  WikidataId id;
  RecordKind kind = RecordKind::kEntity;
  std::optional<std::string> label_en;
  // Deduplicated after case folding, first spelling wins.
  std::vector<std::string> aliases_en;
  std::vector<Statement> claims;
  std::string datatype;  // properties only
  // Classes named by "value-type constraint" statements (properties only).
  std::vector<WikidataId> value_type_classes;
};

enum class SkipReason { kStructural, kLexeme, kOtherEntityType, kNoEnglish };

struct SkipMarker {
  SkipReason reason;
};

using ParsedLine = std::variant<DumpRecord, SkipMarker>;

struct Alignment {
  WikidataId iri;
  std::string canonical_label;
  std::string alias;

  friend bool operator==(const Alignment &, const Alignment &) = default;
};

struct PropertyMeta {
  WikidataId pid;
  RangeClass range_class = RangeClass::kOther;
};

struct KbStats {
  std::int64_t entity_alignment_count = 0;
  std::int64_t property_alignment_count = 0;
  std::int64_t triple_count = 0;
  std::int64_t records_skipped = 0;

  friend bool operator==(const KbStats &, const KbStats &) = default;
};

// Properties whose objects are places, plus the classes that mark a
// value-type constraint as geographic. File format: one id per line, P ids
// are properties, Q ids are place classes, '#' starts a comment.
struct PlaceAllowlist {
  std::unordered_set<WikidataId> properties;
  std::unordered_set<WikidataId> place_classes;

  static PlaceAllowlist Parse(std::string_view text);
  static PlaceAllowlist Load(const std::filesystem::path &path);
  static PlaceAllowlist Default();
};

// Parses one line of the dump. Structural lines ("[", "]"), lexemes and
// records without any English text come back as SkipMarker. Throws
// FormatError for lines that are not valid records.
ParsedLine ParseDumpRecord(std::string_view line);

// Canonical label first, then every alias in dump order.
std::vector<Alignment> ExtractAlignments(const DumpRecord &rec);

// Truthy facts of an entity record.
std::vector<Triple> ExtractTriples(const DumpRecord &rec);

PropertyMeta ClassifyPropertyRange(const DumpRecord &rec,
                                   const PlaceAllowlist &allowlist);

// Output file names inside a KB directory.
inline constexpr std::string_view kEntityAlignmentsFile = "entity_alignments.tsv";
inline constexpr std::string_view kPropertyAlignmentsFile =
    "property_alignments.tsv";
inline constexpr std::string_view kTriplesFile = "triples.tsv";
inline constexpr std::string_view kPropertyMetaFile = "property_meta.tsv";
inline constexpr std::string_view kStatsFile = "kb_stats.json";

struct BuildOptions {
  std::optional<std::filesystem::path> place_allowlist;
  // Parse each batch of lines with OpenMP. Output is identical either way.
  bool parallel = true;
  std::size_t batch_lines = 4096;
};

// Streams the dump (plain or gzip) and writes the four KB files plus
// kb_stats.json into out_dir. On I/O failure no partial output is left.
KbStats BuildKb(const std::filesystem::path &dump_path,
                const std::filesystem::path &out_dir,
                const BuildOptions &options = {});

std::string FormatAlignment(const Alignment &a);
std::string FormatTriple(const Triple &t);
std::string FormatPropertyMeta(const PropertyMeta &m);

// Reads an alignment file. Throws FormatError naming the line on bad rows.
std::vector<Alignment> ReadAlignments(const std::filesystem::path &path);

// kb_stats.json content.
std::string FormatStats(const KbStats &stats);
KbStats ReadStats(const std::filesystem::path &path);

}  // namespace kb
}  // namespace falcon

#endif  // FALCON_KB_INGEST_H_
