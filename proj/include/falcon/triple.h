#ifndef FALCON_TRIPLE_H_
#define FALCON_TRIPLE_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "falcon/wikidata_id.h"

namespace falcon {

// Object written for statements whose value is a literal (date, quantity,
// string, ...). It satisfies an object wildcard but never a bound object.
inline constexpr std::string_view kLiteralObject = "__LIT__";

// One fact (subject, property, object). An empty object means the literal
// sentinel.
struct Triple {
  WikidataId s;
  WikidataId p;
  std::optional<WikidataId> o;

  bool is_literal() const { return !o.has_value(); }
  std::string ObjectString() const {
    return o ? o->ToString() : std::string(kLiteralObject);
  }

  friend auto operator<=>(const Triple &, const Triple &) = default;
};

enum class RangeClass { kDate, kPlace, kOther };

std::string_view RangeClassName(RangeClass range);
std::optional<RangeClass> ParseRangeClass(std::string_view name);

}  // namespace falcon

#endif  // FALCON_TRIPLE_H_
