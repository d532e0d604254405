#include "driftwatch/ingest.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <thread>

#include "json.hpp"

#include "driftwatch/textprep.hpp"

namespace driftwatch {

void SourceSpec::validate() const {
  if (kind == SourceKind::stdin_stream) return;
  if (path.empty()) throw std::invalid_argument("source path/endpoint must be non-empty");
  if (replay_rate && !(*replay_rate > 0.0)) {
    throw std::invalid_argument("replay_rate must be > 0");
  }
}

namespace {

class FileLineSource final : public LineSource {
 public:
  FileLineSource(const std::string& path, std::optional<double> rate)
      : in_(path), rate_(rate) {
    if (!in_) throw SourceError("cannot open source: " + path);
    if (rate_) start_ = std::chrono::steady_clock::now();
  }

  std::optional<std::string> next_line() override {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    if (rate_) {
      using namespace std::chrono;
      const auto due = start_ + duration_cast<steady_clock::duration>(
                                    duration<double>(static_cast<double>(count_) / *rate_));
      std::this_thread::sleep_until(due);
      ++count_;
    }
    return line;
  }

 private:
  std::ifstream in_;
  std::optional<double> rate_;
  std::chrono::steady_clock::time_point start_{};
  std::int64_t count_ = 0;
};

class StdinLineSource final : public LineSource {
 public:
  std::optional<std::string> next_line() override {
    std::string line;
    if (!std::getline(std::cin, line)) return std::nullopt;
    return line;
  }
};

}  // namespace

std::unique_ptr<LineSource> open_line_source(const SourceSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SourceKind::stdin_stream:
      return std::make_unique<StdinLineSource>();
    case SourceKind::file_replay:
      return std::make_unique<FileLineSource>(spec.path, spec.replay_rate);
    case SourceKind::live:
      // A live endpoint is any openable NDJSON byte stream (typically a
      // FIFO fed by an external adapter); no throttling.
      return std::make_unique<FileLineSource>(spec.path, std::nullopt);
  }
  throw std::invalid_argument("unknown source kind");
}

ParseResult parse_record(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded()) return {std::nullopt, "invalid JSON"};
  if (!j.is_object()) return {std::nullopt, "not a JSON object"};

  const auto text_it = j.find("text");
  if (text_it == j.end()) return {std::nullopt, "missing field: text"};
  if (!text_it->is_string()) return {std::nullopt, "text is not a string"};

  const auto ts_it = j.find("created_at");
  if (ts_it == j.end()) return {std::nullopt, "missing field: created_at"};
  if (!ts_it->is_string()) return {std::nullopt, "created_at is not a string"};
  const auto ts = parse_rfc3339(ts_it->get<std::string>());
  if (!ts) return {std::nullopt, "created_at is not RFC 3339"};

  TweetRecord rec;
  rec.created_at = *ts;
  rec.text = text_it->get<std::string>();
  const auto lang_it = j.find("lang");
  if (lang_it != j.end() && lang_it->is_string()) {
    rec.lang = lang_it->get<std::string>();
  }
  return {std::move(rec), ""};
}

std::optional<LangPolicy> lang_policy_from_string(const std::string& s) {
  if (s == "metadata") return LangPolicy::metadata;
  if (s == "heuristic") return LangPolicy::heuristic;
  if (s == "off") return LangPolicy::off;
  return std::nullopt;
}

const char* to_string(LangPolicy p) {
  switch (p) {
    case LangPolicy::metadata: return "metadata";
    case LangPolicy::heuristic: return "heuristic";
    case LangPolicy::off: return "off";
  }
  return "?";
}

const std::unordered_set<std::string>& english_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a",      "about",  "after",  "again",  "all",    "also",   "am",     "an",
      "and",    "any",    "are",    "as",     "at",     "back",   "be",     "because",
      "been",   "before", "being",  "below",  "between","both",   "but",    "by",
      "can",    "could",  "day",    "did",    "do",     "does",   "down",   "each",
      "even",   "few",    "first",  "for",    "from",   "further","get",    "give",
      "go",     "good",   "had",    "has",    "have",   "he",     "her",    "here",
      "him",    "his",    "how",    "i",      "if",     "in",     "into",   "is",
      "it",     "its",    "just",   "know",   "like",   "look",   "make",   "many",
      "me",     "more",   "most",   "my",     "new",    "no",     "not",    "now",
      "of",     "off",    "on",     "once",   "one",    "only",   "or",     "other",
      "our",    "out",    "over",   "own",    "people", "said",   "same",   "see",
      "she",    "should", "so",     "some",   "such",   "take",   "than",   "that",
      "the",    "their",  "them",   "then",   "there",  "these",  "they",   "think",
      "this",   "those",  "through","time",   "to",     "too",    "two",    "under",
      "until",  "up",     "us",     "use",    "very",   "want",   "was",    "way",
      "we",     "well",   "were",   "what",   "when",   "where",  "which",  "while",
      "who",    "whom",   "why",    "will",   "with",   "work",   "would",  "year",
      "you",    "your",   "yours",  "itself", "himself","herself","myself", "ourselves",
      "themselves", "yourself", "having", "doing", "during", "against", "above",
      "quite",  "rather", "really", "still",
  };
  return words;
}

bool language_accepts(const TweetRecord& record, const LangFilterConfig& config) {
  switch (config.policy) {
    case LangPolicy::off:
      return true;
    case LangPolicy::metadata:
      if (record.lang) return *record.lang == "en";
      break;  // absent lang falls through to the heuristic
    case LangPolicy::heuristic:
      break;
  }

  const auto tokens = tokenize(clean(record.text));
  if (tokens.empty()) return true;  // nothing to judge; scores 0 downstream
  const auto& stopwords = english_stopwords();
  std::size_t hits = 0;
  for (const auto& tok : tokens) {
    if (stopwords.count(tok)) ++hits;
  }
  const double fraction = static_cast<double>(hits) / static_cast<double>(tokens.size());
  return fraction >= config.heuristic_threshold;
}

RecordSource::RecordSource(std::unique_ptr<LineSource> lines) : lines_(std::move(lines)) {}

std::optional<TweetRecord> RecordSource::next() {
  while (auto line = lines_->next_line()) {
    ++counters_.lines_read;
    if (line->empty()) {
      ++counters_.parse_errors;
      continue;
    }
    auto parsed = parse_record(*line);
    if (!parsed.record) {
      ++counters_.parse_errors;
      continue;
    }
    return std::move(parsed.record);
  }
  return std::nullopt;
}

IngestSession::IngestSession(const SourceSpec& spec, LangFilterConfig lang)
    : records_(open_line_source(spec)), lang_(lang) {}

std::optional<TweetRecord> IngestSession::next() {
  while (auto rec = records_.next()) {
    if (!language_accepts(*rec, lang_)) {
      ++lang_rejected_;
      continue;
    }
    rec->seq = next_seq_++;
    ++accepted_;
    return rec;
  }
  return std::nullopt;
}

IngestCounters IngestSession::counters() const {
  IngestCounters c = records_.counters();
  c.lang_rejected = lang_rejected_;
  c.accepted = accepted_;
  return c;
}

}  // namespace driftwatch
