#ifndef FALCON_ALIAS_INDEX_H_
#define FALCON_ALIAS_INDEX_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "falcon/kb_ingest.h"
#include "falcon/wikidata_id.h"

namespace falcon {
namespace index {

enum class IndexKind : std::uint8_t { kEntity = 0, kProperty = 1 };

std::string_view IndexKindName(IndexKind kind);
std::optional<IndexKind> ParseIndexKind(std::string_view name);

// Candidate lists are capped at these sizes unless the caller says otherwise.
inline constexpr std::size_t kDefaultEntityK = 50;
inline constexpr std::size_t kDefaultPropertyK = 25;

struct Candidate {
  WikidataId iri;
  std::string matched_label;  // the alias that matched
  double text_score = 0.0;    // in [0, 1]
  int rank = 0;               // number of verifying ASK answers

  friend bool operator==(const Candidate &, const Candidate &) = default;
};

// Case-folded, diacritic-free, punctuation-stripped whitespace tokens.
// Periods and quotes are deleted ("U.S.A." -> usa); hyphens, slashes and
// dashes split words.
std::vector<std::string> Normalize(std::string_view text);

// Token-overlap F1 over token multisets: 2 * |q ∩ a| / (|q| + |a|).
// Identical sequences score 1.0.
double Score(std::span<const std::string> query_tokens,
             std::span<const std::string> alias_tokens);

// Inverted index from normalized alias tokens to alignments. Immutable after
// construction; concurrent Query calls are safe.
class AliasIndex {
 public:
  AliasIndex() = default;

  // Normalizes aliases in parallel. (iri, alias) duplicates keep the first.
  static AliasIndex Build(std::vector<kb::Alignment> alignments, IndexKind kind);
  // Single-threaded reference for Build; produces an identical index.
  static AliasIndex BuildSerial(std::vector<kb::Alignment> alignments,
                                IndexKind kind);
  static AliasIndex FromAlignmentsFile(const std::filesystem::path &path,
                                       IndexKind kind);

  // Up to k candidates ordered by (text_score desc, iri asc, label asc).
  std::vector<Candidate> Query(std::string_view surface, std::size_t k) const;

  // Binary layout: magic "FALCONIX", u32 version, then little-endian tables.
  void Save(const std::filesystem::path &path) const;
  static AliasIndex Load(const std::filesystem::path &path);

  IndexKind kind() const { return kind_; }
  std::size_t size() const { return alignments_.size(); }
  std::size_t token_count() const { return tokens_.size(); }
  const kb::Alignment &alignment(std::uint32_t id) const { return alignments_[id]; }
  std::span<const std::uint32_t> postings(std::string_view token) const;
  std::vector<std::string> normalized(std::uint32_t id) const;

  friend bool operator==(const AliasIndex &a, const AliasIndex &b) {
    return a.kind_ == b.kind_ && a.alignments_ == b.alignments_ &&
           a.norm_cache_ == b.norm_cache_ && a.tokens_ == b.tokens_ &&
           a.postings_ == b.postings_;
  }

  static constexpr std::uint32_t kFormatVersion = 1;

 private:
  static AliasIndex Assemble(std::vector<kb::Alignment> alignments,
                             IndexKind kind, bool parallel);
  void BuildPostings(std::vector<std::vector<std::string>> normalized);

  IndexKind kind_ = IndexKind::kEntity;
  std::vector<kb::Alignment> alignments_;
  std::vector<std::vector<std::uint32_t>> norm_cache_;  // token ids per alias
  std::vector<std::string> tokens_;                     // token id -> text
  std::unordered_map<std::string, std::uint32_t> token_ids_;
  std::vector<std::vector<std::uint32_t>> postings_;    // token id -> aliases
};

}  // namespace index
}  // namespace falcon

#endif  // FALCON_ALIAS_INDEX_H_
