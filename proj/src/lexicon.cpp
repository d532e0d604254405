#include "driftwatch/lexicon.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>
#include <string>

namespace driftwatch {

namespace {

std::string basename_of(const std::string& path) {
  const size_t slash = path.find_last_of("/\\");
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

[[noreturn]] void fail(const std::string& path, int line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  size_t i = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
    if (s.size() == 1) return false;
  }
  long v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    v = v * 10 + (s[i] - '0');
    if (v > 1000000) return false;
  }
  out = static_cast<int>(neg ? -v : v);
  return true;
}

}  // namespace

Lexicon load_lexicon(const std::string& path, LexiconKind kind, LoadDiagnostics* diag) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path);

  std::unordered_map<std::string, int> entries;
  LoadDiagnostics local{};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      fail(path, line_no, "malformed line, expected word<TAB>value");
    }
    std::string word = line.substr(0, tab);
    std::string value = line.substr(tab + 1);

    int score = 0;
    if (kind == LexiconKind::binary) {
      if (value == "positive") {
        score = 1;
      } else if (value == "negative") {
        score = -1;
      } else {
        fail(path, line_no, "binary lexicon value must be 'positive' or 'negative'");
      }
    } else {
      if (!parse_int(value, score)) fail(path, line_no, "score is not an integer");
      if (score == 0 || score < -5 || score > 5) {
        fail(path, line_no, "score out of range [-5,-1] u [1,5]");
      }
    }

    auto [it, inserted] = entries.insert_or_assign(std::move(word), score);
    (void)it;
    if (!inserted) ++local.duplicate_words;
  }
  if (in.bad()) throw std::runtime_error("read error on lexicon file: " + path);

  if (diag) *diag = local;
  return Lexicon(basename_of(path), kind, std::move(entries));
}

ScoredPost score(const TokenBag& bag, const Lexicon& lex) {
  ScoredPost out;
  out.seq = bag.source_seq;
  out.token_count = static_cast<int>(bag.tokens.size());
  for (const auto& tok : bag.tokens) {
    const int v = lex.value_of(tok);
    if (v != 0) {
      out.score += v;
      ++out.matched;
    }
  }
  return out;
}

LexiconKind parse_lexicon_kind(const std::string& name) {
  if (name == "binary") return LexiconKind::binary;
  if (name == "scored") return LexiconKind::scored;
  throw std::invalid_argument("unknown lexicon kind: " + name);
}

}  // namespace driftwatch
