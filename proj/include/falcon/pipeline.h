#ifndef FALCON_PIPELINE_H_
#define FALCON_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

// Recognition: POS tagging, tokenization & compounding, n-gram tiling, and
// the right-headed split used by the linker's fallback.
namespace falcon {
namespace pipeline {

enum class Pos { kNoun, kPropn, kVerb, kAdj, kAdv, kQword, kStop, kOther };

std::string_view PosName(Pos pos);
std::optional<Pos> ParsePos(std::string_view name);

struct TaggedToken {
  std::string word;
  Pos pos = Pos::kOther;
  // Byte offsets into the input; word == input.substr(begin, end - begin).
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const TaggedToken &, const TaggedToken &) = default;
};

enum class Hint { kEntityish, kRelationish, kUnknown };

std::string_view HintName(Hint hint);

struct SurfaceForm {
  std::string text;  // token words joined by single spaces
  std::vector<TaggedToken> tokens;
  Hint hint = Hint::kUnknown;

  std::size_t begin() const { return tokens.front().begin; }
  std::size_t end() const { return tokens.back().end; }
  bool HasPos(Pos pos) const;
  bool proper() const { return HasPos(Pos::kPropn); }
  bool has_verb() const { return HasPos(Pos::kVerb); }

  friend bool operator==(const SurfaceForm &, const SurfaceForm &) = default;
};

SurfaceForm MakeForm(std::vector<TaggedToken> tokens, Hint hint = Hint::kUnknown);

// Default cap on input length, in bytes.
inline constexpr std::size_t kDefaultMaxTextChars = 512;

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<TaggedToken> Tag(std::string_view text) const = 0;
};

// Deterministic tagger: closed-class stopword list, a word->tag lexicon,
// -ing/-ed/-s/-ly suffix rules against the lexicon, and capitalization ->
// PROPN for unknown words after the first one. All-uppercase input carries no case
// signal and is tagged as if lowercased. Words the lexicon cannot explain are
// treated as names (PROPN).
class LexiconTagger : public PosTagger {
 public:
  LexiconTagger(std::string_view stopwords, std::string_view lexicon);

  // The stopword list and lexicon shipped under data/.
  static const LexiconTagger &Default();
  static LexiconTagger FromFiles(const std::filesystem::path &stopwords,
                                 const std::filesystem::path &lexicon);

  std::vector<TaggedToken> Tag(std::string_view text) const override;

  bool IsStopword(std::string_view lowered) const;
  std::size_t lexicon_size() const { return lexicon_.size(); }

 private:
  Pos TagWord(std::string_view word, bool mid_sentence, bool use_case) const;
  std::optional<Pos> Lookup(const std::string &lowered) const;
  std::optional<Pos> SuffixRule(const std::string &lowered) const;

  std::unordered_set<std::string> stopwords_;
  std::unordered_map<std::string, Pos> lexicon_;
};

// Drops stopwords, question words and punctuation; each VERB becomes its own
// RELATIONISH form; adjacent PROPN tokens compound into one form; every other
// content token is a form of its own. Hints are assigned before returning.
std::vector<SurfaceForm> TokenizeCompound(std::span<const TaggedToken> tagged);

// One left-to-right tiling pass. Adjacent forms merge when the text between
// them holds only STOP tokens and either nothing separates them or both are
// proper (or both common). VERB forms never merge. Returns true if any merge
// happened.
bool TilePass(std::vector<SurfaceForm> &forms, std::span<const TaggedToken> tagged);

// TilePass to a fixpoint, then hints. Idempotent.
std::vector<SurfaceForm> NgramTile(std::vector<SurfaceForm> forms,
                                   std::span<const TaggedToken> tagged);

// Detaches the rightmost token: [t1..tn] -> ([t1..tn-1], [tn]).
std::optional<std::pair<SurfaceForm, SurfaceForm>> NgramSplit(const SurfaceForm &form);

// Verb forms are RELATIONISH, forms holding a PROPN are ENTITYISH, common-noun
// forms are RELATIONISH when an ENTITYISH form exists and UNKNOWN otherwise.
void AssignHints(std::vector<SurfaceForm> &forms);

// "[operating income, Qantas]"
std::string FormatForms(std::span<const SurfaceForm> forms);

}  // namespace pipeline
}  // namespace falcon

#endif  // FALCON_PIPELINE_H_
