#ifndef FALCON_TRIPLE_STORE_H_
#define FALCON_TRIPLE_STORE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <unordered_map>
#include <vector>

#include "falcon/triple.h"
#include "falcon/wikidata_id.h"

namespace falcon {
namespace store {

// Existence-only fact store. Two sorted projections of the same triple set
// answer (s, p, ?) and (?, p, o) patterns by binary search. Immutable after
// construction and safe for concurrent readers.
class TripleStore {
 public:
  TripleStore() = default;

  // Reads the kb-ingest triple and property-meta files. Throws FormatError
  // with the offending line number.
  static TripleStore Load(const std::filesystem::path &triples_path,
                          const std::filesystem::path &meta_path);

  static TripleStore FromTriples(
      std::vector<Triple> triples,
      std::unordered_map<WikidataId, RangeClass> meta = {});

  // p is always bound; an empty optional is a wildcard. The literal sentinel
  // satisfies an object wildcard only. Throws InvalidRequest when both s and
  // o are wildcards.
  bool Ask(const std::optional<WikidataId> &s, const WikidataId &p,
           const std::optional<WikidataId> &o) const;

  // Range of a property, kOther when unknown.
  RangeClass range_class(const WikidataId &pid) const;

  // Distinct triples held.
  std::size_t size() const { return spo_.size(); }
  std::size_t meta_size() const { return meta_.size(); }

 private:
  using Row = std::array<std::uint64_t, 3>;
  static constexpr std::uint64_t kLiteral = ~std::uint64_t{0};

  void Finish();

  std::vector<Row> spo_;  // (s, p, o)
  std::vector<Row> pos_;  // (p, o, s), literal objects omitted
  std::unordered_map<WikidataId, RangeClass> meta_;
};

}  // namespace store
}  // namespace falcon

#endif  // FALCON_TRIPLE_STORE_H_
