#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "driftwatch/time.hpp"

namespace driftwatch {

struct TweetRecord {
  std::int64_t seq = 0;  // assigned when the record is accepted downstream
  UtcTime created_at{};
  std::string text;
  std::optional<std::string> lang;  // ISO-639-1, absent when the source omits it
};

enum class SourceKind { file_replay, stdin_stream, live };

struct SourceSpec {
  SourceKind kind = SourceKind::file_replay;
  std::string path;                        // file path, endpoint, or "-" convention
  std::optional<double> replay_rate;       // posts/second; absent = unthrottled

  void validate() const;  // throws std::invalid_argument
};

// Raised when a source cannot be opened or fails mid-stream (maps to the
// CLI's exit code 2). End-of-stream is not an error.
struct SourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One raw NDJSON line at a time; nullopt at end of stream. Implementations
// buffer a single line, independent of stream length.
class LineSource {
 public:
  virtual ~LineSource() = default;
  virtual std::optional<std::string> next_line() = 0;
};

struct ParseResult {
  std::optional<TweetRecord> record;
  std::string error;  // non-empty iff record is absent
};

// Parses one NDJSON object: created_at (RFC 3339) and text are mandatory,
// lang optional. Invalid JSON, invalid UTF-8, or a missing mandatory field
// is a parse error, never an exception.
ParseResult parse_record(const std::string& line);

enum class LangPolicy { metadata, heuristic, off };

struct LangFilterConfig {
  LangPolicy policy = LangPolicy::metadata;
  double heuristic_threshold = 0.10;  // min stopword fraction to accept
};

std::optional<LangPolicy> lang_policy_from_string(const std::string& s);
const char* to_string(LangPolicy p);

// Pure accept/reject decision. "metadata": lang == "en", or lang absent and
// the stopword heuristic passes. "heuristic": stopword fraction of the
// cleaned tokens >= threshold (token-free posts are accepted). "off": all.
bool language_accepts(const TweetRecord& record, const LangFilterConfig& config);

const std::unordered_set<std::string>& english_stopwords();

struct IngestCounters {
  std::uint64_t lines_read = 0;
  std::uint64_t parse_errors = 0;
  std::uint64_t lang_rejected = 0;
  std::uint64_t accepted = 0;
};

// Yields parsed records in source order, skipping malformed lines with a
// per-reason diagnostic count. Holds one record at a time.
class RecordSource {
 public:
  explicit RecordSource(std::unique_ptr<LineSource> lines);
  std::optional<TweetRecord> next();
  const IngestCounters& counters() const { return counters_; }

 private:
  std::unique_ptr<LineSource> lines_;
  IngestCounters counters_;
};

// Opens the line-level source. file-replay requires an existing readable
// file; live requires an openable endpoint path (e.g. a FIFO); stdin reads
// the process's standard input.
std::unique_ptr<LineSource> open_line_source(const SourceSpec& spec);

// Full ingest front end: source -> parse -> language filter, assigning
// consecutive seq numbers to accepted records only.
class IngestSession {
 public:
  IngestSession(const SourceSpec& spec, LangFilterConfig lang);
  std::optional<TweetRecord> next();
  IngestCounters counters() const;

 private:
  RecordSource records_;
  LangFilterConfig lang_;
  std::int64_t next_seq_ = 0;
  std::uint64_t lang_rejected_ = 0;
  std::uint64_t accepted_ = 0;
};

}  // namespace driftwatch
