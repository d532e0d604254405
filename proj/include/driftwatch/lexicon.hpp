#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "driftwatch/textprep.hpp"
#include "driftwatch/time.hpp"

namespace driftwatch {

enum class LexiconKind { binary, scored };

// Immutable word -> polarity/intensity map. Binary lexicons hold +1/-1,
// scored lexicons hold integers in [-5,-1] u [1,5].
class Lexicon {
 public:
  Lexicon(std::string name, LexiconKind kind,
          std::unordered_map<std::string, int> entries)
      : name_(std::move(name)), kind_(kind), entries_(std::move(entries)) {}

  const std::string& name() const { return name_; }
  LexiconKind kind() const { return kind_; }
  std::size_t size() const { return entries_.size(); }

  // 0 when the word is not in the lexicon.
  int value_of(const std::string& word) const {
    auto it = entries_.find(word);
    return it == entries_.end() ? 0 : it->second;
  }

  bool contains(const std::string& word) const { return entries_.count(word) != 0; }

 private:
  std::string name_;
  LexiconKind kind_;
  std::unordered_map<std::string, int> entries_;
};

// One post after lexicon scoring; `score` is the y_k fed to the detector.
struct ScoredPost {
  std::int64_t seq = 0;
  UtcTime created_at{};
  int score = 0;
  int matched = 0;      // lexicon hits, counting repeats
  int token_count = 0;  // bag size
};

struct LoadDiagnostics {
  int duplicate_words = 0;  // later entry replaced an earlier one
};

// Loads a TSV lexicon. Binary format: word<TAB>positive|negative.
// Scored format: word<TAB>integer in [-5,-1] u [1,5].
// Throws std::runtime_error with the offending line number on malformed
// input, out-of-range scores, or an unreadable file. Duplicate words keep
// the last entry and bump the diagnostic counter.
Lexicon load_lexicon(const std::string& path, LexiconKind kind,
                     LoadDiagnostics* diag = nullptr);

// score = sum of entry values over all tokens (misses contribute 0).
ScoredPost score(const TokenBag& bag, const Lexicon& lex);

LexiconKind parse_lexicon_kind(const std::string& name);  // "binary" | "scored"

}  // namespace driftwatch
