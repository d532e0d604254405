#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "driftwatch/detect.hpp"
#include "driftwatch/lexicon.hpp"
#include "driftwatch/offline.hpp"
#include "driftwatch/textprep.hpp"

namespace driftwatch {

// CSV helpers (RFC 4180: CRLF-free LF lines, quoting only when needed).
std::string csv_escape(const std::string& field);
std::string format_double(double v);  // 6 significant digits, empty for NaN

// scores.csv: seq,timestamp,score
void write_scores_csv(const std::vector<ScoredPost>& posts, const std::string& path);
std::vector<ScoredPost> read_scores_csv(const std::string& path);

// Series CSV: timestamp,value. read_series_csv also accepts the 3-column
// scores.csv layout (seq,timestamp,score) and a parallel events workflow.
void write_series_csv(const ScoreSeries& series, const std::string& path);
ScoreSeries read_series_csv(const std::string& path);

void write_histogram_csv(const std::vector<HistogramBin>& bins, const std::string& path);
void write_segmentation_csv(const SegmentationResult& result, const std::string& path);
void write_comparison_csv(const MatchReport& report, const std::string& path);

// events.ndjson: one object per line with index, timestamp (RFC 3339),
// direction, theta0_before, theta0_after, g_at_alarm.
std::string event_to_ndjson(const ChangeEvent& ev);
void write_events_ndjson(const std::vector<ChangeEvent>& events, const std::string& path);
std::vector<ChangeEvent> read_events_ndjson(const std::string& path);

// Token sidecar: {"seq":n,"tokens":[...]} per line.
std::string token_bag_to_ndjson(const TokenBag& bag);
void write_token_bags_ndjson(const std::vector<TokenBag>& bags, const std::string& path);
std::vector<TokenBag> read_token_bags_ndjson(const std::string& path);

}  // namespace driftwatch
