#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ontolearn::text {

// Bytes >= 0x80 count as word characters so UTF-8 sequences never split.
inline bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// ASCII casefold.
inline std::string casefold(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Casefold, trim and collapse internal whitespace runs to one space. This is
// the comparison key used for dedup, overlap statistics and scoring.
inline std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                         : static_cast<char>(c));
  }
  return out;
}

// True if `needle` occurs in `haystack` (both already casefolded) with a
// non-word byte or the string edge on each side.
inline bool contains_bounded(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  std::size_t pos = haystack.find(needle);
  while (pos != std::string_view::npos) {
    const bool left_ok =
        pos == 0 || !is_word_byte(static_cast<unsigned char>(haystack[pos - 1]));
    const std::size_t end = pos + needle.size();
    const bool right_ok =
        end == haystack.size() ||
        !is_word_byte(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) return true;
    pos = haystack.find(needle, pos + 1);
  }
  return false;
}

// Casefold, split on non-word bytes, drop tokens shorter than min_length.
inline std::vector<std::string> tokenize(std::string_view s,
                                         std::size_t min_length = 2) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && cur.size() >= min_length) tokens.push_back(cur);
    cur.clear();
  };
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                           : static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

inline std::string join(const std::vector<std::string>& parts,
                        std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

}  // namespace ontolearn::text
