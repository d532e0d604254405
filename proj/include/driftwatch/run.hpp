#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftwatch/detect.hpp"
#include "driftwatch/ingest.hpp"
#include "driftwatch/lexicon.hpp"
#include "driftwatch/report.hpp"

namespace driftwatch {

// Maps to the CLI's exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmitFlags {
  bool scores_csv = true;
  bool events_ndjson = true;
  bool svg = false;
  bool runlog = true;
  bool tokens = false;  // sidecar needed for `report`; off to honor
                        // discard-after-process by default
};

struct RunConfig {
  SourceSpec source;
  std::string lexicon_path;
  LexiconKind lexicon_kind = LexiconKind::binary;
  DetectorConfig detector;
  LangFilterConfig lang;
  std::string out_dir = "driftwatch-out";
  EmitFlags emit;
  std::size_t queue_capacity = 1024;
};

// JSON round-trip for config files (field names mirror RunConfig).
RunConfig run_config_from_json_file(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

struct WatchResult {
  IngestCounters counters;
  std::vector<ChangeEvent> events;
  std::int64_t positive_events = 0;
  std::int64_t negative_events = 0;
  std::size_t queue_high_water = 0;
  std::size_t queue_capacity = 0;
  int ring_capacity = 0;
  double elapsed_seconds = 0.0;
  bool interrupted = false;
};

// The online pass: ingest -> clean -> tokenize -> score -> detect, streaming
// scores into the run log and every alarm to event_out as one NDJSON line.
// Ingest/scoring runs on a producer thread connected to the serial detector
// stage by a bounded queue, so at most queue_capacity + 1 posts are in
// flight. Throws ConfigError (bad config / lexicon) or SourceError before
// any output file is created; `interrupt` requests a clean early stop with
// flushed outputs.
WatchResult run_watch(const RunConfig& config, std::ostream& event_out,
                      const std::atomic<bool>* interrupt = nullptr);

struct AnalyzeConfig {
  std::string scores_csv;
  std::string events_ndjson;  // optional; enables the comparison report
  std::string out_dir = "driftwatch-out";
  int window = 200;
  std::optional<double> penalty;  // nullopt = 2*ln(n)
  std::optional<int> max_changepoints;  // nullopt = #events if known, else 10
  std::int64_t tolerance = 300;
  double bin_width = 1.0;
  SvgColors colors;
};

struct AnalyzeResult {
  SegmentationResult segmentation;
  std::optional<MatchReport> comparison;
  std::size_t series_length = 0;
};

AnalyzeResult run_analyze(const AnalyzeConfig& config);

struct ReportConfig {
  std::string scores_csv;
  std::string events_ndjson;
  std::string tokens_ndjson;
  std::string out_dir = "driftwatch-out";
  int top_k = 30;
  SvgColors colors;
};

struct ReportResult {
  std::size_t segments = 0;
  std::vector<std::string> files_written;
};

ReportResult run_report(const ReportConfig& config);

// Re-runs the detector over a run log's score stream with the logged config
// and checks the produced events against the logged ones. Returns an error
// description, or nullopt when the log replays exactly.
std::optional<std::string> verify_runlog_replay(const std::string& runlog_path);

}  // namespace driftwatch
