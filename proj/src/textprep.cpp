#include "driftwatch/textprep.hpp"

#include <cctype>
#include <string_view>

namespace driftwatch {

namespace {

bool is_space(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  return u == ' ' || u == '\t' || u == '\n' || u == '\r' || u == '\v' || u == '\f';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

// Everything printable-ASCII that is neither a letter nor a digit, plus
// non-space control bytes. Bytes >= 0x80 (UTF-8 continuation material) are
// kept as-is.
bool is_punct_like(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  if (u >= 0x80) return false;
  if (is_space(c) || is_digit(c) || is_ascii_letter(c)) return false;
  return true;
}

bool is_url_token(std::string_view tok) {
  if (tok.find("://") != std::string_view::npos) return true;
  if (tok.size() >= 5) {
    auto lower = [](char c) {
      return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    };
    if (lower(tok[0]) == 't' && tok[1] == '.' && lower(tok[2]) == 'c' &&
        lower(tok[3]) == 'o' && tok[4] == '/') {
      return true;
    }
  }
  return false;
}

}  // namespace

std::string clean(const std::string& text) {
  std::string out;
  out.reserve(text.size());

  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(text[i])) ++i;
    if (i >= n) break;
    size_t start = i;
    while (i < n && !is_space(text[i])) ++i;
    std::string_view tok(text.data() + start, i - start);

    if (is_url_token(tok)) continue;
    if (tok.front() == '@' || tok.front() == '#') continue;

    // Per-character pass: digits vanish, punctuation splits, letters fold.
    for (char c : tok) {
      if (is_digit(c)) continue;
      if (is_punct_like(c)) c = ' ';
      if (c == ' ') {
        if (!out.empty() && out.back() != ' ') out.push_back(' ');
        continue;
      }
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      out.push_back(c);
    }
    if (!out.empty() && out.back() != ' ') out.push_back(' ');
  }

  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::vector<std::string> tokenize(const std::string& cleaned) {
  std::vector<std::string> tokens;
  size_t i = 0;
  const size_t n = cleaned.size();
  while (i < n) {
    while (i < n && is_space(cleaned[i])) ++i;
    if (i >= n) break;
    size_t start = i;
    while (i < n && !is_space(cleaned[i])) ++i;
    tokens.emplace_back(cleaned, start, i - start);
  }
  return tokens;
}

TokenBag make_token_bag(const std::string& cleaned, std::int64_t source_seq) {
  return TokenBag{tokenize(cleaned), source_seq};
}

}  // namespace driftwatch
