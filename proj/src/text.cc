#include "falcon/text.h"

namespace falcon {
namespace text {

namespace {

// Base letters for U+0100..U+017F. '?' marks ligatures handled separately.
constexpr std::string_view kLatinExtA =
    "aaaaaa" "cccccccc" "dddd" "eeeeeeeeee" "gggggggg" "hhhh" "iiiiiiiiii"
    "??" "jj" "kkk" "llllllllll" "nnnnnnnnn" "oooooo" "??" "rrrrrr"
    "ssssssss" "tttttt" "uuuuuuuuuuuu" "ww" "yyy" "zzzzzz" "s";

static_assert(kLatinExtA.size() == 0x80);

char32_t LowerCodepoint(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  }
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x17F) {
    if (cp == 0x130) return 'i';
    if (cp == 0x178) return 0xFF;
    bool even_upper = (cp <= 0x137) || (cp >= 0x14A && cp <= 0x177);
    bool odd_upper = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
    if (even_upper && cp % 2 == 0) return cp + 1;
    if (odd_upper && cp % 2 == 1) return cp + 1;
    return cp;
  }
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

bool IsUpperCodepoint(char32_t cp) { return LowerCodepoint(cp) != cp; }

bool IsLowerCodepoint(char32_t cp) {
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp >= 0xDF && cp <= 0xFF && cp != 0xF7) return true;
  if (cp >= 0x100 && cp <= 0x17F) return !IsUpperCodepoint(cp);
  if (cp >= 0x3B1 && cp <= 0x3C9) return true;
  if (cp >= 0x430 && cp <= 0x45F) return true;
  return false;
}

bool IsLetter(char32_t cp) { return IsUpperCodepoint(cp) || IsLowerCodepoint(cp); }

// Appends the diacritic-free form of an already lowercased code point.
void AppendFolded(std::string &out, char32_t cp) {
  if (cp >= 0xDF && cp <= 0xFF) {
    switch (cp) {
      case 0xDF: out += "ss"; return;
      case 0xE6: out += "ae"; return;
      case 0xFE: out += "th"; return;
      case 0xF0: out += 'd'; return;
      case 0xE7: out += 'c'; return;
      case 0xF1: out += 'n'; return;
      case 0xF7: AppendUtf8(out, cp); return;
      default: break;
    }
    if (cp <= 0xE5) { out += 'a'; return; }
    if (cp >= 0xE8 && cp <= 0xEB) { out += 'e'; return; }
    if (cp >= 0xEC && cp <= 0xEF) { out += 'i'; return; }
    if ((cp >= 0xF2 && cp <= 0xF6) || cp == 0xF8) { out += 'o'; return; }
    if (cp >= 0xF9 && cp <= 0xFC) { out += 'u'; return; }
    if (cp == 0xFD || cp == 0xFF) { out += 'y'; return; }
  }
  if (cp >= 0x100 && cp <= 0x17F) {
    if (cp == 0x132 || cp == 0x133) { out += "ij"; return; }
    if (cp == 0x152 || cp == 0x153) { out += "oe"; return; }
    out += kLatinExtA[cp - 0x100];
    return;
  }
  AppendUtf8(out, cp);
}

}  // namespace

char32_t DecodeUtf8(std::string_view s, std::size_t &pos) {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  unsigned char c = byte(pos);
  if (c < 0x80) {
    ++pos;
    return c;
  }
  int extra;
  char32_t cp;
  if ((c & 0xE0) == 0xC0) {
    extra = 1;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    extra = 2;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    extra = 3;
    cp = c & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + extra >= s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i <= extra; ++i) {
    unsigned char cc = byte(pos + i);
    if ((cc & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

void AppendUtf8(std::string &out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string ToLower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t start = pos;
    char32_t cp = DecodeUtf8(s, pos);
    if (cp == 0xFFFD) {
      out.append(s.substr(start, pos - start));
    } else {
      AppendUtf8(out, LowerCodepoint(cp));
    }
  }
  return out;
}

std::string FoldForMatch(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    char32_t cp = DecodeUtf8(s, pos);
    if (cp >= 0x300 && cp <= 0x36F) continue;  // combining marks
    AppendFolded(out, LowerCodepoint(cp));
  }
  return out;
}

bool IsSpace(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200B) ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool IsSeparatorPunct(char32_t cp) {
  return cp == '-' || cp == '/' || cp == '_' ||
         (cp >= 0x2010 && cp <= 0x2015) || cp == 0x2212;
}

bool IsDroppedPunct(char32_t cp) {
  if (cp < 0x80) {
    return cp > 0x20 && cp < 0x7F && !(cp >= '0' && cp <= '9') &&
           !(cp >= 'a' && cp <= 'z') && !(cp >= 'A' && cp <= 'Z') &&
           !IsSeparatorPunct(cp);
  }
  if (cp >= 0xA1 && cp <= 0xBF) return true;
  if (cp == 0xD7 || cp == 0xF7) return true;
  if (cp >= 0x2016 && cp <= 0x205E) return !IsSpace(cp);
  return false;
}

bool IsAllUpper(std::string_view s) {
  bool any_letter = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    char32_t cp = DecodeUtf8(s, pos);
    if (IsLowerCodepoint(cp)) return false;
    if (IsUpperCodepoint(cp)) any_letter = true;
  }
  return any_letter;
}

bool StartsUpper(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    char32_t cp = DecodeUtf8(s, pos);
    if (IsLetter(cp)) return IsUpperCodepoint(cp);
  }
  return false;
}

bool HasDigit(std::string_view s) {
  for (char c : s) {
    if (c >= '0' && c <= '9') return true;
  }
  return false;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (b < e && space(s[b])) ++b;
  while (e > b && space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string_view> Split(std::string_view s, char delim) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t p = s.find(delim, start);
    if (p == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, p - start));
    start = p + 1;
  }
}

std::string SanitizeField(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace text
}  // namespace falcon
