#include "falcon/triple_store.h"

#include <algorithm>
#include <fstream>

#include "falcon/error.h"
#include "falcon/text.h"

namespace falcon {
namespace store {

namespace fs = std::filesystem;

TripleStore TripleStore::Load(const fs::path &triples_path,
                              const fs::path &meta_path) {
  TripleStore store;
  std::ifstream in(triples_path, std::ios::binary);
  if (!in) throw IoError("cannot open triples " + triples_path.string());
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = text::Split(line, '\t');
    if (f.size() != 3) {
      throw FormatError(triples_path.string() + ": expected s<TAB>p<TAB>o", line_no);
    }
    auto s = WikidataId::Parse(f[0]);
    auto p = WikidataId::Parse(f[1]);
    if (!s || !s->is_item() || !p || !p->is_property()) {
      throw FormatError(triples_path.string() + ": bad subject or property", line_no);
    }
    std::uint64_t o = kLiteral;
    if (f[2] != kLiteralObject) {
      auto obj = WikidataId::Parse(f[2]);
      if (!obj || !obj->is_item()) {
        throw FormatError(triples_path.string() + ": bad object", line_no);
      }
      o = obj->number();
    }
    store.spo_.push_back({s->number(), p->number(), o});
  }
  if (in.bad()) throw IoError("read failed for " + triples_path.string());

  std::ifstream meta(meta_path, std::ios::binary);
  if (!meta) throw IoError("cannot open property meta " + meta_path.string());
  line_no = 0;
  while (std::getline(meta, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = text::Split(line, '\t');
    auto pid = f.size() == 2 ? WikidataId::Parse(f[0]) : std::nullopt;
    auto range = f.size() == 2 ? ParseRangeClass(f[1]) : std::nullopt;
    if (!pid || !pid->is_property() || !range) {
      throw FormatError(meta_path.string() + ": expected pid<TAB>DATE|PLACE|OTHER",
                        line_no);
    }
    store.meta_[*pid] = *range;
  }
  store.Finish();
  return store;
}

TripleStore TripleStore::FromTriples(
    std::vector<Triple> triples,
    std::unordered_map<WikidataId, RangeClass> meta) {
  TripleStore store;
  store.spo_.reserve(triples.size());
  for (const Triple &t : triples) {
    if (!t.s.is_item() || !t.p.is_property() || (t.o && !t.o->is_item())) {
      throw InvalidRequest("triple must be (Q, P, Q|literal)");
    }
    store.spo_.push_back({t.s.number(), t.p.number(), t.o ? t.o->number() : kLiteral});
  }
  store.meta_ = std::move(meta);
  store.Finish();
  return store;
}

void TripleStore::Finish() {
  std::sort(spo_.begin(), spo_.end());
  spo_.erase(std::unique(spo_.begin(), spo_.end()), spo_.end());
  pos_.clear();
  pos_.reserve(spo_.size());
  for (const Row &r : spo_) {
    if (r[2] != kLiteral) pos_.push_back({r[1], r[2], r[0]});
  }
  std::sort(pos_.begin(), pos_.end());
}

bool TripleStore::Ask(const std::optional<WikidataId> &s, const WikidataId &p,
                      const std::optional<WikidataId> &o) const {
  if (!s && !o) throw InvalidRequest("ASK pattern needs a bound subject or object");
  if (!p.is_property()) return false;
  if ((s && !s->is_item()) || (o && !o->is_item())) return false;

  if (s && o) {
    return std::binary_search(spo_.begin(), spo_.end(),
                              Row{s->number(), p.number(), o->number()});
  }
  if (s) {
    auto it = std::lower_bound(spo_.begin(), spo_.end(), Row{s->number(), p.number(), 0});
    return it != spo_.end() && (*it)[0] == s->number() && (*it)[1] == p.number();
  }
  auto it = std::lower_bound(pos_.begin(), pos_.end(), Row{p.number(), o->number(), 0});
  return it != pos_.end() && (*it)[0] == p.number() && (*it)[1] == o->number();
}

RangeClass TripleStore::range_class(const WikidataId &pid) const {
  auto it = meta_.find(pid);
  return it == meta_.end() ? RangeClass::kOther : it->second;
}

}  // namespace store
}  // namespace falcon
