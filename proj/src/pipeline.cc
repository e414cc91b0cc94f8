#include "falcon/pipeline.h"

#include <fstream>
#include <sstream>

#include "falcon/error.h"
#include "falcon/resources.h"
#include "falcon/text.h"

namespace falcon {
namespace pipeline {

namespace {

constexpr std::string_view kQuestionWords[] = {"who",   "what",  "when",
                                               "where", "which", "how",
                                               "why",   "whom",  "whose"};

bool IsQuestionWord(std::string_view lowered) {
  for (std::string_view q : kQuestionWords) {
    if (q == lowered) return true;
  }
  return false;
}

bool IsTrimmable(char32_t cp) {
  return text::IsDroppedPunct(cp) || text::IsSeparatorPunct(cp);
}

// Byte range of the word proper inside [begin, end): surrounding punctuation
// and a possessive suffix are excluded.
std::pair<std::size_t, std::size_t> WordCore(std::string_view s, std::size_t begin,
                                             std::size_t end) {
  std::size_t b = begin;
  while (b < end) {
    std::size_t next = b;
    char32_t cp = text::DecodeUtf8(s, next);
    if (!IsTrimmable(cp)) break;
    b = next;
  }
  std::size_t e = end;
  while (e > b) {
    std::size_t start = e - 1;
    while (start > b && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) {
      --start;
    }
    std::size_t probe = start;
    char32_t cp = text::DecodeUtf8(s, probe);
    if (!IsTrimmable(cp)) break;
    e = start;
  }
  std::string_view core = s.substr(b, e - b);
  for (std::string_view suffix : {std::string_view("'s"), std::string_view("\xE2\x80\x99s"),
                                  std::string_view("'S")}) {
    if (core.size() > suffix.size() && core.ends_with(suffix)) {
      e -= suffix.size();
      break;
    }
  }
  return {b, e};
}

bool EndsWith(const std::string &s, std::string_view suffix) {
  return s.size() > suffix.size() && std::string_view(s).ends_with(suffix);
}

}  // namespace

std::string_view PosName(Pos pos) {
  switch (pos) {
    case Pos::kNoun: return "NOUN";
    case Pos::kPropn: return "PROPN";
    case Pos::kVerb: return "VERB";
    case Pos::kAdj: return "ADJ";
    case Pos::kAdv: return "ADV";
    case Pos::kQword: return "QWORD";
    case Pos::kStop: return "STOP";
    case Pos::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<Pos> ParsePos(std::string_view name) {
  for (Pos pos : {Pos::kNoun, Pos::kPropn, Pos::kVerb, Pos::kAdj, Pos::kAdv,
                  Pos::kQword, Pos::kStop, Pos::kOther}) {
    if (PosName(pos) == name) return pos;
  }
  return std::nullopt;
}

std::string_view HintName(Hint hint) {
  switch (hint) {
    case Hint::kEntityish: return "ENTITYISH";
    case Hint::kRelationish: return "RELATIONISH";
    case Hint::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

bool SurfaceForm::HasPos(Pos pos) const {
  for (const TaggedToken &t : tokens) {
    if (t.pos == pos) return true;
  }
  return false;
}

SurfaceForm MakeForm(std::vector<TaggedToken> tokens, Hint hint) {
  SurfaceForm form;
  for (const TaggedToken &t : tokens) {
    if (!form.text.empty()) form.text += ' ';
    form.text += t.word;
  }
  form.tokens = std::move(tokens);
  form.hint = hint;
  return form;
}

LexiconTagger::LexiconTagger(std::string_view stopwords, std::string_view lexicon) {
  for (std::string_view line : text::Split(stopwords, '\n')) {
    std::string word = text::Trim(line);
    if (word.empty() || word[0] == '#') continue;
    stopwords_.insert(text::ToLower(word));
  }
  long line_no = 0;
  for (std::string_view line : text::Split(lexicon, '\n')) {
    ++line_no;
    std::string trimmed = text::Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto fields = text::Split(trimmed, '\t');
    if (fields.size() != 2) throw FormatError("lexicon: expected word<TAB>TAG", line_no);
    auto pos = ParsePos(text::Trim(fields[1]));
    if (!pos) {
      throw FormatError("lexicon: unknown tag '" + std::string(fields[1]) + "'", line_no);
    }
    lexicon_[text::ToLower(text::Trim(fields[0]))] = *pos;
  }
}

const LexiconTagger &LexiconTagger::Default() {
  static const LexiconTagger tagger(resources::Stopwords(), resources::Lexicon());
  return tagger;
}

LexiconTagger LexiconTagger::FromFiles(const std::filesystem::path &stopwords,
                                       const std::filesystem::path &lexicon) {
  auto slurp = [](const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return LexiconTagger(slurp(stopwords), slurp(lexicon));
}

bool LexiconTagger::IsStopword(std::string_view lowered) const {
  return stopwords_.count(std::string(lowered)) > 0;
}

std::optional<Pos> LexiconTagger::Lookup(const std::string &lowered) const {
  auto it = lexicon_.find(lowered);
  if (it == lexicon_.end()) return std::nullopt;
  return it->second;
}

std::optional<Pos> LexiconTagger::SuffixRule(const std::string &w) const {
  auto verb = [&](const std::string &stem) {
    auto pos = Lookup(stem);
    return pos && *pos == Pos::kVerb;
  };
  if (EndsWith(w, "ly")) return Pos::kAdv;
  if (EndsWith(w, "ing") || EndsWith(w, "ed")) {
    std::size_t cut = EndsWith(w, "ing") ? 3 : 2;
    std::string stem = w.substr(0, w.size() - cut);
    std::vector<std::string> stems = {stem, stem + "e"};
    if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
      stems.push_back(stem.substr(0, stem.size() - 1));
    }
    if (cut == 2) {
      stems.push_back(w.substr(0, w.size() - 1));
      if (!stem.empty() && stem.back() == 'i') {
        stems.push_back(stem.substr(0, stem.size() - 1) + "y");
      }
    }
    for (const std::string &s : stems) {
      if (verb(s)) return Pos::kVerb;
    }
  }
  if (EndsWith(w, "s") && !EndsWith(w, "ss")) {
    if (auto pos = Lookup(w.substr(0, w.size() - 1))) return pos;
    if (EndsWith(w, "es")) {
      if (auto pos = Lookup(w.substr(0, w.size() - 2))) return pos;
      if (EndsWith(w, "ies")) {
        if (auto pos = Lookup(w.substr(0, w.size() - 3) + "y")) return pos;
      }
    }
  }
  return std::nullopt;
}

Pos LexiconTagger::TagWord(std::string_view word, bool mid_sentence,
                           bool use_case) const {
  std::string lowered = text::ToLower(word);
  if (IsQuestionWord(lowered)) return Pos::kQword;
  if (stopwords_.count(lowered)) return Pos::kStop;
  // Lexicon words keep their tag when capitalized so that "ID" and "id" tag
  // alike; capitalization only decides for unknown words.
  if (auto pos = Lookup(lowered)) return *pos;
  bool capitalized = use_case && mid_sentence && text::StartsUpper(word);
  if (text::HasDigit(lowered)) return Pos::kNoun;
  if (capitalized) return Pos::kPropn;
  if (lowered.find('-') != std::string::npos) return Pos::kNoun;
  if (auto pos = SuffixRule(lowered)) return *pos;
  return Pos::kPropn;
}

std::vector<TaggedToken> LexiconTagger::Tag(std::string_view input) const {
  std::vector<TaggedToken> out;
  bool use_case = !text::IsAllUpper(input);
  std::size_t pos = 0;
  while (pos < input.size()) {
    std::size_t start = pos;
    if (text::IsSpace(text::DecodeUtf8(input, pos))) continue;
    std::size_t end = pos;
    while (end < input.size()) {
      std::size_t next = end;
      if (text::IsSpace(text::DecodeUtf8(input, next))) break;
      end = next;
    }
    pos = end;
    auto [b, e] = WordCore(input, start, end);
    TaggedToken token;
    if (b >= e) {
      token.word = std::string(input.substr(start, end - start));
      token.pos = Pos::kOther;
      token.begin = start;
      token.end = end;
    } else {
      token.word = std::string(input.substr(b, e - b));
      token.begin = b;
      token.end = e;
      token.pos = TagWord(token.word, !out.empty(), use_case);
    }
    out.push_back(std::move(token));
  }
  return out;
}

void AssignHints(std::vector<SurfaceForm> &forms) {
  bool any_entity = false;
  for (SurfaceForm &f : forms) {
    if (f.has_verb()) {
      f.hint = Hint::kRelationish;
    } else if (f.proper()) {
      f.hint = Hint::kEntityish;
      any_entity = true;
    }
  }
  for (SurfaceForm &f : forms) {
    if (!f.has_verb() && !f.proper()) {
      f.hint = any_entity ? Hint::kRelationish : Hint::kUnknown;
    }
  }
}

std::vector<SurfaceForm> TokenizeCompound(std::span<const TaggedToken> tagged) {
  std::vector<SurfaceForm> forms;
  std::vector<TaggedToken> run;
  auto flush = [&] {
    if (!run.empty()) forms.push_back(MakeForm(std::move(run)));
    run.clear();
  };
  for (const TaggedToken &t : tagged) {
    switch (t.pos) {
      case Pos::kPropn:
        run.push_back(t);
        break;
      case Pos::kNoun:
      case Pos::kAdj:
      case Pos::kVerb:
        flush();
        forms.push_back(MakeForm({t}));
        break;
      default:
        flush();
        break;
    }
  }
  flush();
  AssignHints(forms);
  return forms;
}

bool TilePass(std::vector<SurfaceForm> &forms, std::span<const TaggedToken> tagged) {
  if (forms.size() < 2) return false;
  auto mergeable = [&](const SurfaceForm &a, const SurfaceForm &b) {
    if (a.has_verb() || b.has_verb()) return false;
    bool gap_empty = true;
    for (const TaggedToken &t : tagged) {
      if (t.begin >= a.end() && t.end <= b.begin()) {
        if (t.pos != Pos::kStop) return false;
        gap_empty = false;
      }
    }
    return gap_empty || a.proper() == b.proper();
  };
  std::vector<SurfaceForm> out;
  bool changed = false;
  out.push_back(forms.front());
  for (std::size_t i = 1; i < forms.size(); ++i) {
    if (mergeable(out.back(), forms[i])) {
      std::vector<TaggedToken> tokens = out.back().tokens;
      tokens.insert(tokens.end(), forms[i].tokens.begin(), forms[i].tokens.end());
      out.back() = MakeForm(std::move(tokens));
      changed = true;
    } else {
      out.push_back(forms[i]);
    }
  }
  forms = std::move(out);
  return changed;
}

std::vector<SurfaceForm> NgramTile(std::vector<SurfaceForm> forms,
                                   std::span<const TaggedToken> tagged) {
  while (TilePass(forms, tagged)) {
  }
  AssignHints(forms);
  return forms;
}

std::optional<std::pair<SurfaceForm, SurfaceForm>> NgramSplit(const SurfaceForm &form) {
  if (form.tokens.size() < 2) return std::nullopt;
  std::vector<TaggedToken> left(form.tokens.begin(), form.tokens.end() - 1);
  return std::make_pair(MakeForm(std::move(left)), MakeForm({form.tokens.back()}));
}

std::string FormatForms(std::span<const SurfaceForm> forms) {
  std::string out = "[";
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (i) out += ", ";
    out += forms[i].text;
  }
  return out + "]";
}

}  // namespace pipeline
}  // namespace falcon
