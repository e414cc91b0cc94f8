#ifndef FALCON_RULES_H_
#define FALCON_RULES_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "falcon/alias_index.h"
#include "falcon/error.h"
#include "falcon/pipeline.h"
#include "falcon/triple.h"

namespace falcon {
namespace rules {

enum class Stage { kRecognition, kTiling, kRanking };

std::string_view StageName(Stage stage);

inline constexpr std::string_view kVerbRule = "R-VERB";
inline constexpr std::string_view kTileRule = "R-TILE";
inline constexpr std::string_view kHeadwordRule = "R-HEADWORD";

// Question headword (possibly several words, lowercased) and the property
// range it asks for.
struct HeadwordConstraint {
  std::vector<std::string> words;
  RangeClass required_range = RangeClass::kOther;

  std::string text() const;
  friend bool operator==(const HeadwordConstraint &, const HeadwordConstraint &) = default;
};

struct Rule {
  std::string id;
  Stage stage = Stage::kRecognition;
  std::string description;
  bool enabled = true;
  std::vector<HeadwordConstraint> headwords;  // RANKING headword rules only

  friend bool operator==(const Rule &, const Rule &) = default;
};

// Rule catalog: the builtins plus config overrides, ordered by id.
//
// Config directives, one per line ('#' starts a comment):
//   enable <id>
//   disable <id>
//   headword <word>... <DATE|PLACE>
// A headword directive adds rule "R-HEADWORD:<words joined by '_'>".
class Catalog {
 public:
  static Catalog Builtin();
  static Catalog Parse(std::string_view config);
  static Catalog Load(const std::filesystem::path &config_path);

  const std::vector<Rule> &rules() const { return rules_; }
  const Rule *Find(std::string_view id) const;
  bool enabled(std::string_view id) const;
  std::vector<const Rule *> EnabledFor(Stage stage) const;
  // Constraints from every enabled headword rule.
  std::vector<HeadwordConstraint> headwords() const;

 private:
  Rule *FindMutable(std::string_view id);
  void Sort();

  std::vector<Rule> rules_;
};

// Thrown when a stage does not reach a fixpoint within the pass cap.
class FixpointError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kMaxPasses = 16;

// Calls step until it reports no change. Returns the number of passes that
// changed the state.
template <typename State>
int RunToFixpoint(State &state, const std::function<bool(State &)> &step,
                  int max_passes = kMaxPasses) {
  for (int pass = 0; pass < max_passes; ++pass) {
    if (!step(state)) return pass;
  }
  throw FixpointError("no fixpoint after " + std::to_string(max_passes) + " passes");
}

using RangeOf = std::function<RangeClass(const WikidataId &)>;

// The matched headword constraint for a question, if any: the first QWORD
// token and the words after it must spell out a constraint. The longest
// match wins.
std::optional<HeadwordConstraint> MatchHeadword(
    std::span<const pipeline::TaggedToken> tokens,
    std::span<const HeadwordConstraint> constraints);

// Moves candidates whose range equals the required one ahead of the rest,
// keeping relative order inside both groups. Returns the input order when
// the headword does not apply or no candidate matches.
std::vector<index::Candidate> ApplyHeadword(
    std::span<const pipeline::TaggedToken> tokens,
    std::vector<index::Candidate> candidates, const RangeOf &range_of,
    std::span<const HeadwordConstraint> constraints);

// Forward chaining per stage. Each returns the number of passes that changed
// the state; disabled rules are skipped.
int ChainRecognition(const Catalog &catalog, std::vector<pipeline::SurfaceForm> &forms);
int ChainTiling(const Catalog &catalog, std::vector<pipeline::SurfaceForm> &forms,
                std::span<const pipeline::TaggedToken> tagged);
int ChainRanking(const Catalog &catalog, std::span<const pipeline::TaggedToken> tagged,
                 std::vector<index::Candidate> &relations, const RangeOf &range_of);

}  // namespace rules
}  // namespace falcon

#endif  // FALCON_RULES_H_
