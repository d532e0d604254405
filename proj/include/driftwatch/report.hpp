#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "driftwatch/detect.hpp"
#include "driftwatch/offline.hpp"
#include "driftwatch/textprep.hpp"

namespace driftwatch {

// One contiguous stretch of the post stream between change events.
// start_index/end_index are inclusive 0-based positions.
struct Segment {
  std::string label;
  std::int64_t start_index = 0;
  std::int64_t end_index = 0;
  std::vector<TokenBag> posts;
};

struct RankedTerm {
  std::string term;
  double tfidf_weight = 0.0;
  std::int64_t raw_count = 0;
};

// Descending by weight, ties broken lexicographically ascending.
using TermRanking = std::vector<RankedTerm>;

// Each segment is one document: tf = raw count in target, df = number of
// segments containing the term, weight = tf * ln(N/df). Zero-weight terms
// (present everywhere or absent from target) are dropped; top_k kept.
TermRanking tfidf_rank(const Segment& target, const std::vector<Segment>& corpus,
                       int top_k);

// k events cut the stream into k+1 contiguous segments. Positions <= an
// event's index stay with the preceding segment. Boundaries at or past the
// last position cannot open a new segment and are skipped. When `bags` is
// non-empty it must parallel `posts` and is sliced into the segments.
std::vector<Segment> split_by_events(std::span<const ScoredPost> posts,
                                     std::span<const ChangeEvent> events,
                                     std::span<const TokenBag> bags = {});

struct SvgColors {
  std::string positive = "yellow";
  std::string negative = "blue";
  std::string offline = "red";
};

struct SeriesOverlays {
  const ScoreSeries* moving_avg = nullptr;          // optional
  std::span<const ChangeEvent> events;              // online alarms
  std::span<const std::int64_t> offline_changepoints;
  SvgColors colors;
};

// Deterministic SVG: fixed 1000x400 canvas, score polyline, optional moving
// average polyline, vertical change markers. Identical inputs give identical
// bytes. Throws std::runtime_error on an unwritable path.
void render_series_svg(const ScoreSeries& series, const SeriesOverlays& overlays,
                       const std::string& path);

// Horizontal bar chart of a term ranking; same determinism contract.
void render_ranking_svg(const TermRanking& ranking, const std::string& title,
                        const std::string& path);

// RFC 4180 CSV with a header row; floats use 6 significant digits and
// timestamps RFC 3339. Absent values become empty fields.
void export_csv(const ScoreSeries& series, const std::string& path);
void export_csv(const TermRanking& ranking, const std::string& path);
void export_csv(const std::vector<ChangeEvent>& events, const std::string& path);

}  // namespace driftwatch
