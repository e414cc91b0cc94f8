#ifndef FALCON_WIKIDATA_ID_H_
#define FALCON_WIKIDATA_ID_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace falcon {

// A Wikidata item (Q...) or property (P...) identifier.
class WikidataId {
 public:
  enum class Kind : std::uint8_t { kItem, kProperty };

  constexpr WikidataId() = default;
  constexpr WikidataId(Kind kind, std::uint64_t number)
      : kind_(kind), number_(number) {}

  static constexpr WikidataId Item(std::uint64_t n) { return {Kind::kItem, n}; }
  static constexpr WikidataId Property(std::uint64_t n) {
    return {Kind::kProperty, n};
  }

  // Accepts exactly ^[QP][0-9]+$.
  static std::optional<WikidataId> Parse(std::string_view text);

  Kind kind() const { return kind_; }
  std::uint64_t number() const { return number_; }
  bool is_item() const { return kind_ == Kind::kItem; }
  bool is_property() const { return kind_ == Kind::kProperty; }

  std::string ToString() const;

  // Orders by kind, then numeric suffix.
  friend constexpr auto operator<=>(const WikidataId &,
                                    const WikidataId &) = default;

 private:
  Kind kind_ = Kind::kItem;
  std::uint64_t number_ = 0;
};

inline constexpr std::string_view kEntityIriPrefix =
    "http://www.wikidata.org/entity/";
inline constexpr std::string_view kPropertyIriPrefix =
    "http://www.wikidata.org/prop/direct/";

// Full IRI for the public API: entity namespace for items, direct-property
// namespace for properties.
std::string ToIri(const WikidataId &id);

}  // namespace falcon

template <>
struct std::hash<falcon::WikidataId> {
  std::size_t operator()(const falcon::WikidataId &id) const noexcept {
    return std::hash<std::uint64_t>()(id.number() * 2 +
                                      (id.is_property() ? 1 : 0));
  }
};

#endif  // FALCON_WIKIDATA_ID_H_
