#ifndef FALCON_LINKER_H_
#define FALCON_LINKER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "falcon/alias_index.h"
#include "falcon/knowledge_base.h"
#include "falcon/pipeline.h"
#include "falcon/triple_store.h"

namespace falcon {
namespace linker {

enum class Mode { kAuto, kKeyword };

struct LinkRequest {
  std::string text;
  std::size_t k_entities = index::kDefaultEntityK;
  std::size_t k_relations = index::kDefaultPropertyK;
  Mode mode = Mode::kAuto;
};

struct LinkOptions {
  std::size_t max_text_chars = pipeline::kDefaultMaxTextChars;
  // Candidates scoring below this are dropped before ranking.
  double min_text_score = 0.0;
  // Run the ASK kernel with OpenMP. Results are identical either way.
  bool parallel = true;
};

struct LinkedItem {
  index::Candidate candidate;
  pipeline::SurfaceForm form;
};

struct TraceEvent {
  std::string kind;  // mode, tag, compound, tile, candidates, ask, split, revert, rule, ranked, result
  std::string detail;

  friend bool operator==(const TraceEvent &, const TraceEvent &) = default;
};

struct LinkResult {
  std::vector<LinkedItem> entities;
  std::vector<LinkedItem> relations;
  std::vector<TraceEvent> trace;
};

// Candidate lists of one surface form.
struct FormCandidates {
  std::vector<index::Candidate> entities;
  std::vector<index::Candidate> relations;
};

struct AskStats {
  std::int64_t pairs = 0;
  std::int64_t asks = 0;
  std::int64_t hits = 0;  // true answers

  friend bool operator==(const AskStats &, const AskStats &) = default;
};

// (rank desc, text_score desc, iri asc, matched_label asc).
bool CandidateBefore(const index::Candidate &a, const index::Candidate &b);
void SortCandidates(std::vector<index::Candidate> &candidates);

// ENTITYISH forms query the entity index, RELATIONISH forms the property
// index, UNKNOWN forms both. Each IRI keeps its best-scoring alias. Empty
// lists are kept.
std::vector<FormCandidates> GenerateCandidates(
    const std::vector<pipeline::SurfaceForm> &forms, const index::AliasIndex &entities,
    const index::AliasIndex &properties, std::size_t k_entities,
    std::size_t k_relations, double min_text_score = 0.0);

// For every entity candidate of form A and relation candidate of form B != A,
// asks (e, r, ?) and (?, r, e). Each true answer adds 1 to the rank of both.
// Lists are re-sorted with CandidateBefore afterwards.
AskStats RankPairs(std::vector<FormCandidates> &lists, const store::TripleStore &store);
// Single-threaded reference for RankPairs.
AskStats RankPairsSerial(std::vector<FormCandidates> &lists,
                         const store::TripleStore &store);

class Linker {
 public:
  explicit Linker(const KnowledgeBase &kb, LinkOptions options = {})
      : kb_(kb), options_(options) {}

  // Throws InvalidRequest for empty or oversized text and for k == 0.
  LinkResult Link(const LinkRequest &request) const;

  const KnowledgeBase &kb() const { return kb_; }
  const LinkOptions &options() const { return options_; }

 private:
  const KnowledgeBase &kb_;
  LinkOptions options_;
};

// One "kind: detail" line per trace event.
std::string Explain(const LinkResult &result);

}  // namespace linker
}  // namespace falcon

#endif  // FALCON_LINKER_H_
