#include "falcon/knowledge_base.h"

#include <fstream>
#include <sstream>

#include "falcon/error.h"
#include "falcon/resources.h"

namespace falcon {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kRequired[] = {kb::kEntityAlignmentsFile,
                                          kb::kPropertyAlignmentsFile,
                                          kb::kTriplesFile, kb::kPropertyMetaFile};

index::AliasIndex LoadIndex(const fs::path &dir, std::string_view idx_name,
                            std::string_view tsv_name, index::IndexKind kind) {
  fs::path idx = dir / idx_name;
  if (fs::exists(idx)) {
    index::AliasIndex loaded = index::AliasIndex::Load(idx);
    if (loaded.kind() != kind) {
      throw FormatError(idx.string() + ": index kind is " +
                        std::string(index::IndexKindName(loaded.kind())));
    }
    return loaded;
  }
  return index::AliasIndex::FromAlignmentsFile(dir / tsv_name, kind);
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool HasKbArtifacts(const fs::path &dir, std::string *missing) {
  for (std::string_view name : kRequired) {
    if (!fs::is_regular_file(dir / name)) {
      if (missing) *missing = (dir / name).string();
      return false;
    }
  }
  return true;
}

KnowledgeBase LoadKnowledgeBase(const fs::path &dir) {
  std::string missing;
  if (!HasKbArtifacts(dir, &missing)) throw IoError("missing KB file " + missing);
  KnowledgeBase kb;
  kb.entities = LoadIndex(dir, kEntityIndexFile, kb::kEntityAlignmentsFile,
                          index::IndexKind::kEntity);
  kb.properties = LoadIndex(dir, kPropertyIndexFile, kb::kPropertyAlignmentsFile,
                            index::IndexKind::kProperty);
  kb.store = store::TripleStore::Load(dir / kb::kTriplesFile, dir / kb::kPropertyMetaFile);
  if (fs::exists(dir / kRulesFile)) kb.catalog = rules::Catalog::Load(dir / kRulesFile);
  bool custom_stop = fs::exists(dir / kStopwordsFile);
  bool custom_lex = fs::exists(dir / kLexiconFile);
  if (custom_stop || custom_lex) {
    std::string stop = custom_stop ? ReadFile(dir / kStopwordsFile)
                                   : std::string(resources::Stopwords());
    std::string lex = custom_lex ? ReadFile(dir / kLexiconFile)
                                 : std::string(resources::Lexicon());
    kb.tagger = std::make_shared<pipeline::LexiconTagger>(stop, lex);
  }
  if (fs::exists(dir / kb::kStatsFile)) {
    kb.stats = kb::ReadStats(dir / kb::kStatsFile);
  } else {
    kb.stats.entity_alignment_count = static_cast<std::int64_t>(kb.entities.size());
    kb.stats.property_alignment_count = static_cast<std::int64_t>(kb.properties.size());
    kb.stats.triple_count = static_cast<std::int64_t>(kb.store.size());
  }
  return kb;
}

}  // namespace falcon
