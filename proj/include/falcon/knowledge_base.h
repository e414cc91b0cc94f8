#ifndef FALCON_KNOWLEDGE_BASE_H_
#define FALCON_KNOWLEDGE_BASE_H_

#include <filesystem>
#include <memory>
#include <string_view>

#include "falcon/alias_index.h"
#include "falcon/kb_ingest.h"
#include "falcon/pipeline.h"
#include "falcon/rules.h"
#include "falcon/triple_store.h"

namespace falcon {

// Optional files in a KB directory, next to the kb-ingest outputs.
inline constexpr std::string_view kEntityIndexFile = "entity.idx";
inline constexpr std::string_view kPropertyIndexFile = "property.idx";
inline constexpr std::string_view kRulesFile = "rules.conf";
inline constexpr std::string_view kStopwordsFile = "stopwords.txt";
inline constexpr std::string_view kLexiconFile = "lexicon.tsv";

// Everything the linker reads. Immutable once loaded.
struct KnowledgeBase {
  index::AliasIndex entities{};
  index::AliasIndex properties{};
  store::TripleStore store;
  rules::Catalog catalog = rules::Catalog::Builtin();
  std::shared_ptr<const pipeline::PosTagger> tagger;  // null: shipped tagger
  kb::KbStats stats;

  const pipeline::PosTagger &pos_tagger() const {
    return tagger ? *tagger : pipeline::LexiconTagger::Default();
  }
};

// True when dir holds the files LoadKnowledgeBase requires.
bool HasKbArtifacts(const std::filesystem::path &dir, std::string *missing = nullptr);

// Loads a KB directory. Serialized indexes are used when present, otherwise
// the indexes are built from the alignment files. rules.conf, stopwords.txt
// and lexicon.tsv override the shipped defaults when present.
KnowledgeBase LoadKnowledgeBase(const std::filesystem::path &dir);

}  // namespace falcon

#endif  // FALCON_KNOWLEDGE_BASE_H_
