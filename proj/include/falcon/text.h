#ifndef FALCON_TEXT_H_
#define FALCON_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

// Small UTF-8 helpers shared by the tagger and the alias index.
namespace falcon {
namespace text {

// Decodes one code point starting at s[pos] and advances pos. Invalid bytes
// decode to U+FFFD and consume one byte.
char32_t DecodeUtf8(std::string_view s, std::size_t &pos);
void AppendUtf8(std::string &out, char32_t cp);

// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic capitals.
// Diacritics are kept.
std::string ToLower(std::string_view s);

// Case folding with diacritics stripped ("Ångström" -> "angstrom").
// Punctuation handling is left to the caller.
std::string FoldForMatch(std::string_view s);

bool IsSpace(char32_t cp);

// Characters deleted during normalization ("U.S.A." -> "usa").
bool IsDroppedPunct(char32_t cp);

// Characters that split words during normalization (hyphens, slashes, dashes).
bool IsSeparatorPunct(char32_t cp);

// True if the string has at least one letter and no lowercase letters.
bool IsAllUpper(std::string_view s);

// True if the first letter of the string is uppercase.
bool StartsUpper(std::string_view s);

bool HasDigit(std::string_view s);

std::string Trim(std::string_view s);

// Splits on a single-character delimiter, keeping empty fields.
std::vector<std::string_view> Split(std::string_view s, char delim);

// Replaces tab, CR and LF with spaces so the value fits in one TSV field.
std::string SanitizeField(std::string_view s);

}  // namespace text
}  // namespace falcon

#endif  // FALCON_TEXT_H_
