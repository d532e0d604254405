#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace driftwatch {

// Bag of lowercase word tokens extracted from one post.
struct TokenBag {
  std::vector<std::string> tokens;
  std::int64_t source_seq = 0;
};

// Normalizes raw post text. Rules, applied in order:
//   1. drop URL tokens (scheme:// and bare t.co/ forms)
//   2. drop @mention tokens
//   3. drop #hashtag tokens
//   4. remove digits
//   5. replace punctuation with spaces
//   6. lowercase (ASCII; bytes >= 0x80 pass through unchanged)
//   7. collapse whitespace runs and trim
// Total and idempotent: clean(clean(x)) == clean(x).
std::string clean(const std::string& text);

// Splits on whitespace, dropping empty tokens. Order preserved.
std::vector<std::string> tokenize(const std::string& cleaned);

TokenBag make_token_bag(const std::string& cleaned, std::int64_t source_seq);

}  // namespace driftwatch
