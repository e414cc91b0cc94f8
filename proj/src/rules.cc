#include "falcon/rules.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "falcon/text.h"

namespace falcon {
namespace rules {

using pipeline::Pos;

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kRecognition: return "RECOGNITION";
    case Stage::kTiling: return "TILING";
    case Stage::kRanking: return "RANKING";
  }
  return "RECOGNITION";
}

std::string HeadwordConstraint::text() const {
  std::string out;
  for (const std::string &w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

Catalog Catalog::Builtin() {
  Catalog c;
  c.rules_.push_back({std::string(kVerbRule), Stage::kRecognition,
                      "verbs are not entities", true, {}});
  c.rules_.push_back({std::string(kTileRule), Stage::kTiling,
                      "entities with only stopwords between them are one entity",
                      true, {}});
  c.rules_.push_back({std::string(kHeadwordRule), Stage::kRanking,
                      "when -> DATE, where -> PLACE", true,
                      {{{"when"}, RangeClass::kDate}, {{"where"}, RangeClass::kPlace}}});
  c.Sort();
  return c;
}

Catalog Catalog::Parse(std::string_view config) {
  Catalog c = Builtin();
  long line_no = 0;
  for (std::string_view raw : text::Split(config, '\n')) {
    ++line_no;
    std::string line = text::Trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream in(line);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    const std::string &directive = words[0];
    if (directive == "enable" || directive == "disable") {
      if (words.size() != 2) {
        throw FormatError("rules: expected '" + directive + " <id>'", line_no);
      }
      Rule *rule = c.FindMutable(words[1]);
      if (!rule) throw FormatError("rules: unknown rule id '" + words[1] + "'", line_no);
      rule->enabled = directive == "enable";
    } else if (directive == "headword") {
      if (words.size() < 3) {
        throw FormatError("rules: expected 'headword <word>... <DATE|PLACE>'", line_no);
      }
      auto range = ParseRangeClass(words.back());
      if (!range || *range == RangeClass::kOther) {
        throw FormatError("rules: headword range must be DATE or PLACE", line_no);
      }
      HeadwordConstraint hc;
      std::string id = std::string(kHeadwordRule) + ":";
      for (std::size_t i = 1; i + 1 < words.size(); ++i) {
        hc.words.push_back(text::ToLower(words[i]));
        if (i > 1) id += '_';
        id += hc.words.back();
      }
      hc.required_range = *range;
      if (Rule *existing = c.FindMutable(id)) {
        existing->headwords = {hc};
        existing->enabled = true;
      } else {
        c.rules_.push_back({id, Stage::kRanking, "headword " + hc.text() + " -> " +
                                                     std::string(RangeClassName(*range)),
                            true, {hc}});
        c.Sort();
      }
    } else {
      throw FormatError("rules: unknown directive '" + directive + "'", line_no);
    }
  }
  return c;
}

Catalog Catalog::Load(const std::filesystem::path &config_path) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw IoError("cannot read " + config_path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

void Catalog::Sort() {
  std::sort(rules_.begin(), rules_.end(),
            [](const Rule &a, const Rule &b) { return a.id < b.id; });
}

const Rule *Catalog::Find(std::string_view id) const {
  for (const Rule &r : rules_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

Rule *Catalog::FindMutable(std::string_view id) {
  return const_cast<Rule *>(static_cast<const Catalog *>(this)->Find(id));
}

bool Catalog::enabled(std::string_view id) const {
  const Rule *r = Find(id);
  return r && r->enabled;
}

std::vector<const Rule *> Catalog::EnabledFor(Stage stage) const {
  std::vector<const Rule *> out;
  for (const Rule &r : rules_) {
    if (r.enabled && r.stage == stage) out.push_back(&r);
  }
  return out;
}

std::vector<HeadwordConstraint> Catalog::headwords() const {
  std::vector<HeadwordConstraint> out;
  for (const Rule *r : EnabledFor(Stage::kRanking)) {
    out.insert(out.end(), r->headwords.begin(), r->headwords.end());
  }
  return out;
}

std::optional<HeadwordConstraint> MatchHeadword(
    std::span<const pipeline::TaggedToken> tokens,
    std::span<const HeadwordConstraint> constraints) {
  std::size_t q = 0;
  while (q < tokens.size() && tokens[q].pos != Pos::kQword) ++q;
  if (q == tokens.size()) return std::nullopt;
  const HeadwordConstraint *best = nullptr;
  for (const HeadwordConstraint &hc : constraints) {
    if (hc.words.empty() || q + hc.words.size() > tokens.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < hc.words.size() && match; ++i) {
      match = text::ToLower(tokens[q + i].word) == hc.words[i];
    }
    if (match && (!best || hc.words.size() > best->words.size())) best = &hc;
  }
  if (!best) return std::nullopt;
  return *best;
}

std::vector<index::Candidate> ApplyHeadword(
    std::span<const pipeline::TaggedToken> tokens,
    std::vector<index::Candidate> candidates, const RangeOf &range_of,
    std::span<const HeadwordConstraint> constraints) {
  auto hc = MatchHeadword(tokens, constraints);
  if (!hc) return candidates;
  std::stable_partition(candidates.begin(), candidates.end(),
                        [&](const index::Candidate &c) {
                          return range_of(c.iri) == hc->required_range;
                        });
  return candidates;
}

int ChainRecognition(const Catalog &catalog, std::vector<pipeline::SurfaceForm> &forms) {
  auto rules = catalog.EnabledFor(Stage::kRecognition);
  std::function<bool(std::vector<pipeline::SurfaceForm> &)> step =
      [&](std::vector<pipeline::SurfaceForm> &state) {
        bool changed = false;
        for (const Rule *rule : rules) {
          if (rule->id != kVerbRule) continue;
          for (pipeline::SurfaceForm &f : state) {
            if (f.has_verb() && f.hint != pipeline::Hint::kRelationish) {
              f.hint = pipeline::Hint::kRelationish;
              changed = true;
            }
          }
        }
        return changed;
      };
  return RunToFixpoint(forms, step);
}

int ChainTiling(const Catalog &catalog, std::vector<pipeline::SurfaceForm> &forms,
                std::span<const pipeline::TaggedToken> tagged) {
  auto rules = catalog.EnabledFor(Stage::kTiling);
  std::function<bool(std::vector<pipeline::SurfaceForm> &)> step =
      [&](std::vector<pipeline::SurfaceForm> &state) {
        bool changed = false;
        for (const Rule *rule : rules) {
          if (rule->id == kTileRule && pipeline::TilePass(state, tagged)) {
            pipeline::AssignHints(state);
            changed = true;
          }
        }
        return changed;
      };
  return RunToFixpoint(forms, step);
}

int ChainRanking(const Catalog &catalog, std::span<const pipeline::TaggedToken> tagged,
                 std::vector<index::Candidate> &relations, const RangeOf &range_of) {
  // All enabled headword rules act as one rule so that overlapping headwords
  // ("how", "how long") resolve to the longest match instead of competing.
  std::vector<HeadwordConstraint> constraints = catalog.headwords();
  std::function<bool(std::vector<index::Candidate> &)> step =
      [&](std::vector<index::Candidate> &state) {
        if (constraints.empty()) return false;
        auto next = ApplyHeadword(tagged, state, range_of, constraints);
        if (next == state) return false;
        state = std::move(next);
        return true;
      };
  return RunToFixpoint(relations, step);
}

}  // namespace rules
}  // namespace falcon
