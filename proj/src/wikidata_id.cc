#include "falcon/wikidata_id.h"

#include <charconv>

namespace falcon {

std::optional<WikidataId> WikidataId::Parse(std::string_view text) {
  if (text.size() < 2) return std::nullopt;
  Kind kind;
  if (text[0] == 'Q') {
    kind = Kind::kItem;
  } else if (text[0] == 'P') {
    kind = Kind::kProperty;
  } else {
    return std::nullopt;
  }
  std::uint64_t number = 0;
  const char *begin = text.data() + 1;
  const char *end = text.data() + text.size();
  for (const char *p = begin; p != end; ++p) {
    if (*p < '0' || *p > '9') return std::nullopt;
  }
  auto [ptr, ec] = std::from_chars(begin, end, number);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return WikidataId(kind, number);
}

std::string WikidataId::ToString() const {
  std::string s(1, is_item() ? 'Q' : 'P');
  s += std::to_string(number_);
  return s;
}

std::string ToIri(const WikidataId &id) {
  std::string iri(id.is_item() ? kEntityIriPrefix : kPropertyIriPrefix);
  iri += id.ToString();
  return iri;
}

}  // namespace falcon
