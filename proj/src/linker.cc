#include "falcon/linker.h"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "falcon/error.h"
#include "falcon/rules.h"
#include "falcon/text.h"

namespace falcon {
namespace linker {

using index::Candidate;
using pipeline::Hint;
using pipeline::SurfaceForm;

namespace {

// Below this many pairs the OpenMP region costs more than it saves.
constexpr std::size_t kParallelPairThreshold = 256;

std::string Fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::vector<Candidate> QueryDeduped(const index::AliasIndex &idx, const std::string &text,
                                    std::size_t k, double min_score) {
  // Several aliases of one IRI can match; over-fetch so that k distinct IRIs
  // usually survive the dedup.
  std::vector<Candidate> raw = idx.Query(text, k * 4);
  std::vector<Candidate> out;
  std::unordered_map<WikidataId, std::size_t> seen;
  for (Candidate &c : raw) {
    if (c.text_score < min_score) continue;
    if (seen.count(c.iri)) continue;  // raw is sorted, first hit is the best
    seen.emplace(c.iri, out.size());
    out.push_back(std::move(c));
    if (out.size() == k) break;
  }
  return out;
}

struct PairRef {
  std::uint32_t entity_form, entity, relation_form, relation;
};

std::vector<PairRef> EnumeratePairs(const std::vector<FormCandidates> &lists) {
  std::vector<PairRef> pairs;
  for (std::uint32_t a = 0; a < lists.size(); ++a) {
    for (std::uint32_t b = 0; b < lists.size(); ++b) {
      if (a == b) continue;
      for (std::uint32_t e = 0; e < lists[a].entities.size(); ++e) {
        for (std::uint32_t r = 0; r < lists[b].relations.size(); ++r) {
          pairs.push_back({a, e, b, r});
        }
      }
    }
  }
  return pairs;
}

void SortAll(std::vector<FormCandidates> &lists) {
  for (FormCandidates &fc : lists) {
    SortCandidates(fc.entities);
    SortCandidates(fc.relations);
  }
}

std::string TagLine(const std::vector<pipeline::TaggedToken> &tagged) {
  std::string out;
  for (const auto &t : tagged) {
    if (!out.empty()) out += ' ';
    out += t.word + "/" + std::string(pipeline::PosName(t.pos));
  }
  return out;
}

std::string CandidateList(const std::vector<Candidate> &list) {
  std::string out = "[";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += ", ";
    out += list[i].iri.ToString() + " \"" + list[i].matched_label + "\" " +
           Fixed3(list[i].text_score) + " r" + std::to_string(list[i].rank);
  }
  return out + "]";
}

std::string IdList(const std::vector<LinkedItem> &items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i].candidate.iri.ToString();
  }
  return out + "]";
}

bool ItemBefore(const LinkedItem &a, const LinkedItem &b) {
  if (CandidateBefore(a.candidate, b.candidate)) return true;
  if (CandidateBefore(b.candidate, a.candidate)) return false;
  return a.form.begin() < b.form.begin();
}

}  // namespace

bool CandidateBefore(const Candidate &a, const Candidate &b) {
  if (a.rank != b.rank) return a.rank > b.rank;
  if (a.text_score != b.text_score) return a.text_score > b.text_score;
  if (a.iri != b.iri) return a.iri < b.iri;
  return a.matched_label < b.matched_label;
}

void SortCandidates(std::vector<Candidate> &candidates) {
  std::stable_sort(candidates.begin(), candidates.end(), CandidateBefore);
}

std::vector<FormCandidates> GenerateCandidates(const std::vector<SurfaceForm> &forms,
                                               const index::AliasIndex &entities,
                                               const index::AliasIndex &properties,
                                               std::size_t k_entities,
                                               std::size_t k_relations,
                                               double min_text_score) {
  std::vector<FormCandidates> out(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const SurfaceForm &f = forms[i];
    if (f.hint != Hint::kRelationish) {
      out[i].entities = QueryDeduped(entities, f.text, k_entities, min_text_score);
    }
    if (f.hint != Hint::kEntityish) {
      out[i].relations = QueryDeduped(properties, f.text, k_relations, min_text_score);
    }
  }
  return out;
}

AskStats RankPairsSerial(std::vector<FormCandidates> &lists,
                         const store::TripleStore &store) {
  AskStats stats;
  for (std::size_t a = 0; a < lists.size(); ++a) {
    for (std::size_t b = 0; b < lists.size(); ++b) {
      if (a == b) continue;
      for (Candidate &e : lists[a].entities) {
        for (Candidate &r : lists[b].relations) {
          ++stats.pairs;
          int hits = static_cast<int>(store.Ask(e.iri, r.iri, std::nullopt)) +
                     static_cast<int>(store.Ask(std::nullopt, r.iri, e.iri));
          stats.asks += 2;
          stats.hits += hits;
          e.rank += hits;
          r.rank += hits;
        }
      }
    }
  }
  SortAll(lists);
  return stats;
}

AskStats RankPairs(std::vector<FormCandidates> &lists, const store::TripleStore &store) {
  std::vector<PairRef> pairs = EnumeratePairs(lists);
  std::vector<std::uint8_t> hits(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(static) if (pairs.size() >= kParallelPairThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    const PairRef &p = pairs[i];
    const WikidataId &e = lists[p.entity_form].entities[p.entity].iri;
    const WikidataId &r = lists[p.relation_form].relations[p.relation].iri;
    hits[i] = static_cast<std::uint8_t>(store.Ask(e, r, std::nullopt)) +
              static_cast<std::uint8_t>(store.Ask(std::nullopt, r, e));
  }
  AskStats stats;
  stats.pairs = n;
  stats.asks = 2 * n;
  for (std::int64_t i = 0; i < n; ++i) {
    if (!hits[i]) continue;
    const PairRef &p = pairs[i];
    lists[p.entity_form].entities[p.entity].rank += hits[i];
    lists[p.relation_form].relations[p.relation].rank += hits[i];
    stats.hits += hits[i];
  }
  SortAll(lists);
  return stats;
}

LinkResult Linker::Link(const LinkRequest &request) const {
  if (text::Trim(request.text).empty()) throw InvalidRequest("text is empty");
  if (request.text.size() > options_.max_text_chars) {
    throw InvalidRequest("text longer than " + std::to_string(options_.max_text_chars) +
                         " bytes");
  }
  if (request.k_entities == 0 || request.k_relations == 0) {
    throw InvalidRequest("k must be at least 1");
  }

  LinkResult result;
  auto trace = [&](std::string kind, std::string detail) {
    result.trace.push_back({std::move(kind), std::move(detail)});
  };

  std::vector<pipeline::TaggedToken> tagged = kb_.pos_tagger().Tag(request.text);
  trace("tag", TagLine(tagged));

  std::vector<SurfaceForm> forms = pipeline::TokenizeCompound(tagged);
  if (int passes = rules::ChainRecognition(kb_.catalog, forms)) {
    trace("rule", std::string(rules::kVerbRule) + " passes=" + std::to_string(passes));
  }
  trace("compound", pipeline::FormatForms(forms));
  if (int passes = rules::ChainTiling(kb_.catalog, forms, tagged)) {
    trace("rule", std::string(rules::kTileRule) + " passes=" + std::to_string(passes));
  }
  trace("tile", pipeline::FormatForms(forms));

  bool has_qword = std::any_of(tagged.begin(), tagged.end(), [](const auto &t) {
    return t.pos == pipeline::Pos::kQword;
  });
  bool has_relation = std::any_of(forms.begin(), forms.end(), [](const SurfaceForm &f) {
    return f.hint == Hint::kRelationish;
  });
  bool keyword = request.mode == Mode::kKeyword || (!has_relation && !has_qword);

  if (keyword) {
    trace("mode", "keyword");
    std::vector<SurfaceForm> as_entities = forms;
    for (SurfaceForm &f : as_entities) f.hint = Hint::kEntityish;
    auto lists = GenerateCandidates(as_entities, kb_.entities, kb_.properties,
                                    request.k_entities, request.k_relations,
                                    options_.min_text_score);
    for (std::size_t i = 0; i < forms.size(); ++i) {
      trace("ranked", forms[i].text + " E" + CandidateList(lists[i].entities));
      if (!lists[i].entities.empty()) {
        result.entities.push_back({lists[i].entities.front(), forms[i]});
      }
    }
    std::stable_sort(result.entities.begin(), result.entities.end(), ItemBefore);
    trace("result", "entities=" + IdList(result.entities) + " relations=[]");
    return result;
  }

  trace("mode", "auto");
  const std::vector<SurfaceForm> tiled = forms;
  std::size_t budget = tagged.size();
  std::vector<FormCandidates> lists;
  auto generate_and_rank = [&] {
    lists = GenerateCandidates(forms, kb_.entities, kb_.properties, request.k_entities,
                               request.k_relations, options_.min_text_score);
    for (std::size_t i = 0; i < forms.size(); ++i) {
      trace("candidates", forms[i].text + " (" +
                              std::string(pipeline::HintName(forms[i].hint)) +
                              ") entities=" + std::to_string(lists[i].entities.size()) +
                              " relations=" + std::to_string(lists[i].relations.size()));
    }
    AskStats stats = options_.parallel ? RankPairs(lists, kb_.store)
                                       : RankPairsSerial(lists, kb_.store);
    trace("ask", "pairs=" + std::to_string(stats.pairs) +
                     " asks=" + std::to_string(stats.asks) +
                     " true=" + std::to_string(stats.hits));
    return stats;
  };

  AskStats stats = generate_and_rank();
  for (std::size_t iteration = 0; stats.hits == 0; ++iteration) {
    auto target = std::find_if(forms.rbegin(), forms.rend(), [](const SurfaceForm &f) {
      return f.tokens.size() >= 2;
    });
    if (target == forms.rend() || iteration >= budget) {
      if (forms != tiled) {
        trace("revert", "no verifying triple; keeping " + pipeline::FormatForms(tiled));
        forms = tiled;
        stats = generate_and_rank();
      }
      break;
    }
    auto halves = pipeline::NgramSplit(*target);
    std::size_t pos = static_cast<std::size_t>(forms.rend() - target - 1);
    trace("split", "[" + target->text + "] -> [" + halves->first.text + "] + [" +
                       halves->second.text + "]");
    forms[pos] = std::move(halves->first);
    forms.insert(forms.begin() + static_cast<std::ptrdiff_t>(pos) + 1,
                 std::move(halves->second));
    pipeline::AssignHints(forms);
    rules::ChainRecognition(kb_.catalog, forms);
    stats = generate_and_rank();
  }

  // Headword rule. When some relations of a form are verified, it only
  // reorders that verified prefix so a promoted relation is always backed by
  // a true ASK.
  rules::RangeOf range_of = [&](const WikidataId &pid) {
    return kb_.store.range_class(pid);
  };
  for (std::size_t i = 0; i < forms.size(); ++i) {
    std::vector<Candidate> &rel = lists[i].relations;
    auto verified_end = std::find_if(rel.begin(), rel.end(),
                                     [](const Candidate &c) { return c.rank == 0; });
    if (verified_end == rel.begin()) verified_end = rel.end();
    std::vector<Candidate> head(rel.begin(), verified_end);
    if (rules::ChainRanking(kb_.catalog, tagged, head, range_of) > 0) {
      std::copy(head.begin(), head.end(), rel.begin());
      trace("rule", std::string(rules::kHeadwordRule) + " " + forms[i].text + " -> " +
                        rel.front().iri.ToString());
    }
  }

  for (std::size_t i = 0; i < forms.size(); ++i) {
    const FormCandidates &fc = lists[i];
    trace("ranked", forms[i].text + " E" + CandidateList(fc.entities) + " R" +
                        CandidateList(fc.relations));
    const Candidate *e = fc.entities.empty() ? nullptr : &fc.entities.front();
    const Candidate *r = fc.relations.empty() ? nullptr : &fc.relations.front();
    bool as_relation = false;
    switch (forms[i].hint) {
      case Hint::kEntityish: as_relation = false; break;
      case Hint::kRelationish: as_relation = true; break;
      case Hint::kUnknown:
        as_relation = r && (!e || r->rank > e->rank ||
                            (r->rank == e->rank && r->text_score > e->text_score));
        break;
    }
    if (as_relation && r) {
      result.relations.push_back({*r, forms[i]});
    } else if (!as_relation && e) {
      result.entities.push_back({*e, forms[i]});
    }
  }
  std::stable_sort(result.entities.begin(), result.entities.end(), ItemBefore);
  std::stable_sort(result.relations.begin(), result.relations.end(), ItemBefore);
  trace("result", "entities=" + IdList(result.entities) +
                      " relations=" + IdList(result.relations));
  return result;
}

std::string Explain(const LinkResult &result) {
  std::string out;
  for (const TraceEvent &ev : result.trace) {
    out += ev.kind + ": " + ev.detail + "\n";
  }
  return out;
}

}  // namespace linker
}  // namespace falcon
