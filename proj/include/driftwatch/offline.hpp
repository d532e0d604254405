#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "driftwatch/detect.hpp"
#include "driftwatch/time.hpp"

namespace driftwatch {

// A completed sentiment score sequence. Absent values (e.g. the warm-up
// region of a moving average) are NaN.
struct ScoreSeries {
  std::vector<double> values;
  std::vector<UtcTime> timestamps;

  std::size_t size() const { return values.size(); }

  static bool absent(double v) { return std::isnan(v); }
  static constexpr double absent_value() {
    return std::numeric_limits<double>::quiet_NaN();
  }
};

// Trailing mean: out[i] = mean(values[i-window+1 .. i]) once i >= window-1,
// NaN before that. Timestamps carry over.
ScoreSeries moving_average(const ScoreSeries& series, int window);

struct HistogramBin {
  double low = 0.0;  // inclusive lower edge, aligned to a bin_width multiple
  std::int64_t count = 0;
};

// Floor-aligned bins; only non-empty bins are listed, ascending by edge.
// Counts sum to series length.
std::vector<HistogramBin> histogram(const ScoreSeries& series, double bin_width);

// Offline multiple-changepoint estimate. Changepoint c means the boundary
// sits after the c-th sample (1-based), i.e. segment j covers 0-based
// positions [cp_{j-1} .. cp_j - 1] with sentinels 0 and n.
struct SegmentationResult {
  std::vector<std::int64_t> changepoints;  // strictly ascending, in (0, n)
  std::vector<double> segment_means;       // changepoints.size() + 1 entries
  double total_cost = 0.0;                 // sum of segment SSEs + penalty * #changepoints
  double penalty = 0.0;
};

// Binary segmentation on the squared-error cost. Greedy best-first: the
// split with the largest cost reduction across all current segments is
// taken while the reduction exceeds `penalty` and fewer than
// `max_changepoints` splits exist. Ties resolve to the smallest index.
// `penalty` nullopt selects the default 2*ln(n).
SegmentationResult segment(const ScoreSeries& series, std::optional<double> penalty,
                           int max_changepoints);

struct MatchedPair {
  std::int64_t online_index = 0;
  std::int64_t offline_index = 0;
  std::int64_t delta = 0;  // online - offline
};

struct MatchReport {
  std::vector<MatchedPair> matched;
  std::vector<std::int64_t> online_only;
  std::vector<std::int64_t> offline_only;
};

// Greedy nearest-index matching of online alarms against offline
// changepoints within +/- tolerance; each point matches at most once.
MatchReport compare(const std::vector<ChangeEvent>& online_events,
                    const SegmentationResult& offline, std::int64_t tolerance);

}  // namespace driftwatch
