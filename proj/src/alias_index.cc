#include "falcon/alias_index.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>

#include "falcon/error.h"
#include "falcon/text.h"

namespace falcon {
namespace index {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'F', 'A', 'L', 'C', 'O', 'N', 'I', 'X'};

template <typename T>
double OverlapF1(std::vector<T> q, std::vector<T> a) {
  if (q.empty() || a.empty()) return 0.0;
  if (q == a) return 1.0;
  std::size_t total = q.size() + a.size();
  std::sort(q.begin(), q.end());
  std::sort(a.begin(), a.end());
  std::size_t shared = 0;
  auto i = q.begin();
  auto j = a.begin();
  while (i != q.end() && j != a.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(total);
}

bool CandidateBefore(const Candidate &a, const Candidate &b) {
  if (a.text_score != b.text_score) return a.text_score > b.text_score;
  if (a.iri != b.iri) return a.iri < b.iri;
  return a.matched_label < b.matched_label;
}

void WriteU32(std::ostream &out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char *>(b), 4);
}

void WriteU64(std::ostream &out, std::uint64_t v) {
  WriteU32(out, static_cast<std::uint32_t>(v));
  WriteU32(out, static_cast<std::uint32_t>(v >> 32));
}

void WriteString(std::ostream &out, const std::string &s) {
  WriteU32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
 public:
  Reader(std::istream &in, const fs::path &path) : in_(in), path_(path) {}

  std::uint32_t U32() {
    unsigned char b[4];
    Read(reinterpret_cast<char *>(b), 4);
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  std::uint64_t U64() {
    std::uint64_t lo = U32();
    std::uint64_t hi = U32();
    return lo | (hi << 32);
  }
  std::string String() {
    std::uint32_t n = U32();
    std::string s(n, '\0');
    Read(s.data(), n);
    return s;
  }
  void Read(char *dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError("truncated index file " + path_.string());
    }
  }

 private:
  std::istream &in_;
  const fs::path &path_;
};

}  // namespace

std::string_view IndexKindName(IndexKind kind) {
  return kind == IndexKind::kEntity ? "entity" : "property";
}

std::optional<IndexKind> ParseIndexKind(std::string_view name) {
  if (name == "entity") return IndexKind::kEntity;
  if (name == "property") return IndexKind::kProperty;
  return std::nullopt;
}

std::vector<std::string> Normalize(std::string_view input) {
  std::string folded = text::FoldForMatch(input);
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < folded.size()) {
    std::size_t start = pos;
    char32_t cp = text::DecodeUtf8(folded, pos);
    if (text::IsSpace(cp) || text::IsSeparatorPunct(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (!text::IsDroppedPunct(cp)) {
      current.append(folded, start, pos - start);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double Score(std::span<const std::string> query_tokens,
             std::span<const std::string> alias_tokens) {
  return OverlapF1(std::vector<std::string>(query_tokens.begin(), query_tokens.end()),
                   std::vector<std::string>(alias_tokens.begin(), alias_tokens.end()));
}

AliasIndex AliasIndex::Build(std::vector<kb::Alignment> alignments,
                             IndexKind kind) {
  return Assemble(std::move(alignments), kind, true);
}

AliasIndex AliasIndex::BuildSerial(std::vector<kb::Alignment> alignments,
                                   IndexKind kind) {
  return Assemble(std::move(alignments), kind, false);
}

AliasIndex AliasIndex::FromAlignmentsFile(const fs::path &path, IndexKind kind) {
  return Build(kb::ReadAlignments(path), kind);
}

AliasIndex AliasIndex::Assemble(std::vector<kb::Alignment> alignments,
                                IndexKind kind, bool parallel) {
  AliasIndex index;
  index.kind_ = kind;

  // Drop repeated (iri, alias) pairs, keeping file order.
  std::set<std::pair<WikidataId, std::string_view>> seen;
  std::vector<bool> keep(alignments.size(), false);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < alignments.size(); ++i) {
    if (seen.emplace(alignments[i].iri, alignments[i].alias).second) {
      keep[i] = true;
      ++kept;
    }
  }
  index.alignments_.reserve(kept);
  for (std::size_t i = 0; i < alignments.size(); ++i) {
    if (keep[i]) index.alignments_.push_back(std::move(alignments[i]));
  }

  std::vector<std::vector<std::string>> normalized(index.alignments_.size());
  const long n = static_cast<long>(normalized.size());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      normalized[i] = Normalize(index.alignments_[i].alias);
    }
  } else {
    for (long i = 0; i < n; ++i) {
      normalized[i] = Normalize(index.alignments_[i].alias);
    }
  }
  index.BuildPostings(std::move(normalized));
  return index;
}

void AliasIndex::BuildPostings(std::vector<std::vector<std::string>> normalized) {
  norm_cache_.resize(normalized.size());
  for (std::size_t id = 0; id < normalized.size(); ++id) {
    auto &ids = norm_cache_[id];
    ids.reserve(normalized[id].size());
    for (std::string &tok : normalized[id]) {
      auto [it, inserted] =
          token_ids_.try_emplace(tok, static_cast<std::uint32_t>(tokens_.size()));
      if (inserted) {
        tokens_.push_back(std::move(tok));
        postings_.emplace_back();
      }
      ids.push_back(it->second);
      auto &list = postings_[it->second];
      if (list.empty() || list.back() != id) {
        list.push_back(static_cast<std::uint32_t>(id));
      }
    }
  }
}

std::span<const std::uint32_t> AliasIndex::postings(std::string_view token) const {
  auto it = token_ids_.find(std::string(token));
  if (it == token_ids_.end()) return {};
  return postings_[it->second];
}

std::vector<std::string> AliasIndex::normalized(std::uint32_t id) const {
  std::vector<std::string> out;
  for (std::uint32_t t : norm_cache_[id]) out.push_back(tokens_[t]);
  return out;
}

std::vector<Candidate> AliasIndex::Query(std::string_view surface,
                                         std::size_t k) const {
  std::vector<std::string> tokens = Normalize(surface);
  if (tokens.empty() || k == 0) return {};

  // Unknown tokens get ids past the vocabulary so they count in |q| but never
  // match.
  std::vector<std::uint32_t> query_ids;
  std::uint32_t next_unknown = static_cast<std::uint32_t>(tokens_.size());
  std::vector<std::uint32_t> matches;
  for (const std::string &tok : tokens) {
    auto it = token_ids_.find(tok);
    if (it == token_ids_.end()) {
      query_ids.push_back(next_unknown++);
      continue;
    }
    query_ids.push_back(it->second);
    const auto &list = postings_[it->second];
    matches.insert(matches.end(), list.begin(), list.end());
  }
  std::sort(matches.begin(), matches.end());
  matches.erase(std::unique(matches.begin(), matches.end()), matches.end());

  std::vector<Candidate> out;
  out.reserve(matches.size());
  for (std::uint32_t id : matches) {
    const kb::Alignment &a = alignments_[id];
    out.push_back({a.iri, a.alias, OverlapF1(query_ids, norm_cache_[id]), 0});
  }
  if (out.size() > k) {
    std::partial_sort(out.begin(), out.begin() + static_cast<long>(k), out.end(),
                      CandidateBefore);
    out.resize(k);
  } else {
    std::sort(out.begin(), out.end(), CandidateBefore);
  }
  return out;
}

void AliasIndex::Save(const fs::path &path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create index " + path.string());
  out.write(kMagic, sizeof(kMagic));
  WriteU32(out, kFormatVersion);
  WriteU32(out, static_cast<std::uint32_t>(kind_));
  WriteU32(out, static_cast<std::uint32_t>(alignments_.size()));
  for (std::size_t i = 0; i < alignments_.size(); ++i) {
    const kb::Alignment &a = alignments_[i];
    WriteU32(out, a.iri.is_item() ? 0 : 1);
    WriteU64(out, a.iri.number());
    WriteString(out, a.canonical_label);
    WriteString(out, a.alias);
    WriteU32(out, static_cast<std::uint32_t>(norm_cache_[i].size()));
    for (std::uint32_t t : norm_cache_[i]) WriteU32(out, t);
  }
  WriteU32(out, static_cast<std::uint32_t>(tokens_.size()));
  for (std::size_t t = 0; t < tokens_.size(); ++t) {
    WriteString(out, tokens_[t]);
    WriteU32(out, static_cast<std::uint32_t>(postings_[t].size()));
    for (std::uint32_t id : postings_[t]) WriteU32(out, id);
  }
  out.flush();
  if (!out) throw IoError("write failed for index " + path.string());
}

AliasIndex AliasIndex::Load(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index " + path.string());
  Reader r(in, path);
  char magic[sizeof(kMagic)];
  r.Read(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError(path.string() + " is not an alias index");
  }
  std::uint32_t version = r.U32();
  if (version != kFormatVersion) {
    throw FormatError(path.string() + ": unsupported index version " +
                      std::to_string(version));
  }
  AliasIndex index;
  std::uint32_t kind = r.U32();
  if (kind > 1) throw FormatError(path.string() + ": bad index kind");
  index.kind_ = static_cast<IndexKind>(kind);

  std::uint32_t n = r.U32();
  index.alignments_.resize(n);
  index.norm_cache_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t id_kind = r.U32();
    std::uint64_t number = r.U64();
    index.alignments_[i].iri = WikidataId(
        id_kind == 0 ? WikidataId::Kind::kItem : WikidataId::Kind::kProperty, number);
    index.alignments_[i].canonical_label = r.String();
    index.alignments_[i].alias = r.String();
    index.norm_cache_[i].resize(r.U32());
    for (auto &t : index.norm_cache_[i]) t = r.U32();
  }
  std::uint32_t tokens = r.U32();
  index.tokens_.resize(tokens);
  index.postings_.resize(tokens);
  for (std::uint32_t t = 0; t < tokens; ++t) {
    index.tokens_[t] = r.String();
    index.token_ids_.emplace(index.tokens_[t], t);
    index.postings_[t].resize(r.U32());
    for (auto &id : index.postings_[t]) {
      id = r.U32();
      if (id >= n) throw FormatError(path.string() + ": posting out of range");
    }
  }
  for (const auto &ids : index.norm_cache_) {
    for (std::uint32_t t : ids) {
      if (t >= tokens) throw FormatError(path.string() + ": token out of range");
    }
  }
  return index;
}

}  // namespace index
}  // namespace falcon
