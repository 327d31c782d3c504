#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace dbowsum {

namespace detail {

inline bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_ascii_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }

inline bool is_ascii_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Bytes >= 0x80 are treated as word characters so multi-byte UTF-8
// sequences survive edge stripping intact.
inline bool is_word_char(unsigned char c) {
  return (c >= '0' && c <= '9') || is_ascii_alpha(c) || c >= 0x80;
}

inline char to_lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Abbreviations that keep a following capitalized word inside the same
// sentence. Words with an internal period ("U.S.", "i.e.") and single
// initials ("J.") are handled separately.
inline const std::vector<std::string>& abbreviations() {
  static const std::vector<std::string> kAbbrev = {
      "mr.",   "mrs.",  "ms.",  "dr.",  "prof.", "st.",  "jr.",  "sr.",
      "vs.",   "etc.",  "inc.", "ltd.", "co.",   "no.",  "gen.", "col.",
      "capt.", "lt.",   "sgt.", "sen.", "rep.",  "gov.", "rev.", "hon.",
      "fig.",  "eq.",   "al.",  "mt.",  "ft.",   "jan.", "feb.", "mar.",
      "apr.",  "jun.",  "jul.", "aug.", "sep.",  "sept.", "oct.", "nov.",
      "dec."};
  return kAbbrev;
}

// The whitespace-delimited word ending at text[end] inclusive.
inline std::string word_ending_at(const std::string& text, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && !is_ascii_space(static_cast<unsigned char>(text[begin - 1]))) {
    --begin;
  }
  return text.substr(begin, end - begin + 1);
}

inline bool is_abbreviation(const std::string& raw_word) {
  // Drop leading quotes/brackets before matching.
  std::size_t start = 0;
  while (start < raw_word.size() &&
         !is_word_char(static_cast<unsigned char>(raw_word[start]))) {
    ++start;
  }
  std::string word = raw_word.substr(start);
  if (word.size() < 2 || word.back() != '.') return false;

  // Single initials: "J." in "J. K. Rowling".
  if (word.size() == 2 && is_ascii_alpha(static_cast<unsigned char>(word[0]))) {
    return true;
  }
  // Internal period: "U.S.", "i.e.", "p.m.".
  if (word.find('.') != word.size() - 1) return true;

  std::string lower(word);
  for (char& c : lower) c = to_lower_ascii(c);
  for (const std::string& abbrev : abbreviations()) {
    if (lower == abbrev) return true;
  }
  return false;
}

}  // namespace detail

// Splits raw document text into sentences. A sentence ends at '.', '!' or
// '?' when followed by whitespace and then an uppercase letter (or nothing
// but whitespace until end of input). Periods that terminate known
// abbreviations, single initials, or dotted acronyms do not split.
// Concatenating the results reproduces the input's non-whitespace content.
inline std::vector<std::string> segment_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::string current;

  auto flush = [&]() {
    std::size_t b = 0;
    std::size_t e = current.size();
    while (b < e && detail::is_ascii_space(static_cast<unsigned char>(current[b]))) ++b;
    while (e > b && detail::is_ascii_space(static_cast<unsigned char>(current[e - 1]))) --e;
    if (e > b) sentences.push_back(current.substr(b, e - b));
    current.clear();
  };

  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    current.push_back(text[i]);
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;

    std::size_t j = i + 1;
    if (j < n && !detail::is_ascii_space(static_cast<unsigned char>(text[j]))) {
      continue;  // terminator must be followed by whitespace
    }
    while (j < n && detail::is_ascii_space(static_cast<unsigned char>(text[j]))) ++j;
    bool boundary = (j == n) || detail::is_ascii_upper(static_cast<unsigned char>(text[j]));
    if (!boundary) continue;
    if (c == '.' && detail::is_abbreviation(detail::word_ending_at(text, i))) {
      continue;
    }
    flush();
  }
  flush();
  return sentences;
}

// Lowercases, splits on whitespace, and strips leading/trailing
// non-alphanumeric characters from each token. Internal punctuation
// (hyphens, apostrophes, dots) is kept. Tokens that strip to nothing
// are dropped.
inline std::vector<std::string> tokenize(const std::string& sentence) {
  std::vector<std::string> tokens;
  const std::size_t n = sentence.size();
  std::size_t i = 0;
  while (i < n) {
    while (i < n && detail::is_ascii_space(static_cast<unsigned char>(sentence[i]))) ++i;
    std::size_t begin = i;
    while (i < n && !detail::is_ascii_space(static_cast<unsigned char>(sentence[i]))) ++i;
    if (i == begin) break;

    std::size_t b = begin;
    std::size_t e = i;
    while (b < e && !detail::is_word_char(static_cast<unsigned char>(sentence[b]))) ++b;
    while (e > b && !detail::is_word_char(static_cast<unsigned char>(sentence[e - 1]))) --e;
    if (e == b) continue;

    std::string token = sentence.substr(b, e - b);
    for (char& ch : token) ch = detail::to_lower_ascii(ch);
    tokens.push_back(std::move(token));
  }
  return tokens;
}

// Whitespace-delimited word count, the unit of every summary length budget.
inline int count_words(const std::string& text) {
  int count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    if (detail::is_ascii_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

// First `max_words` whitespace-delimited words of `text`, single-spaced.
inline std::string truncate_words(const std::string& text, int max_words) {
  std::string out;
  int count = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n && count < max_words) {
    while (i < n && detail::is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t begin = i;
    while (i < n && !detail::is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i == begin) break;
    if (!out.empty()) out.push_back(' ');
    out.append(text, begin, i - begin);
    ++count;
  }
  return out;
}

}  // namespace dbowsum
