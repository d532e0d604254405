#include "driftwatch/offline.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace driftwatch {

ScoreSeries moving_average(const ScoreSeries& series, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const std::size_t n = series.size();
  ScoreSeries out;
  out.timestamps = series.timestamps;
  out.values.assign(n, ScoreSeries::absent_value());

  const std::size_t w = static_cast<std::size_t>(window);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    running += series.values[i];
    if (i >= w) running -= series.values[i - w];
    if (i + 1 >= w) out.values[i] = running / static_cast<double>(w);
  }
  return out;
}

std::vector<HistogramBin> histogram(const ScoreSeries& series, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be > 0");
  std::map<std::int64_t, std::int64_t> counts;
  for (double v : series.values) {
    const auto idx = static_cast<std::int64_t>(std::floor(v / bin_width));
    ++counts[idx];
  }
  std::vector<HistogramBin> out;
  out.reserve(counts.size());
  for (const auto& [idx, count] : counts) {
    out.push_back({static_cast<double>(idx) * bin_width, count});
  }
  return out;
}

namespace {

// Prefix sums give O(1) segment SSE. Half-open ranges [a, b) over 0-based
// positions.
struct CostModel {
  std::vector<double> sum;
  std::vector<double> sum_sq;

  explicit CostModel(const std::vector<double>& v)
      : sum(v.size() + 1, 0.0), sum_sq(v.size() + 1, 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      sum[i + 1] = sum[i] + v[i];
      sum_sq[i + 1] = sum_sq[i] + v[i] * v[i];
    }
  }

  double mean(std::int64_t a, std::int64_t b) const {
    return (sum[b] - sum[a]) / static_cast<double>(b - a);
  }

  double sse(std::int64_t a, std::int64_t b) const {
    const double s = sum[b] - sum[a];
    const double q = sum_sq[b] - sum_sq[a];
    return q - s * s / static_cast<double>(b - a);
  }
};

struct CandidateSplit {
  std::int64_t lo = 0, hi = 0;   // segment [lo, hi)
  std::int64_t split = 0;        // boundary: left [lo, split), right [split, hi)
  double reduction = -1.0;       // SSE(lo,hi) - SSE(lo,split) - SSE(split,hi)
};

CandidateSplit best_split(const CostModel& cm, std::int64_t lo, std::int64_t hi) {
  CandidateSplit best{lo, hi, 0, -1.0};
  if (hi - lo < 2) return best;
  const double whole = cm.sse(lo, hi);
  for (std::int64_t s = lo + 1; s < hi; ++s) {
    const double reduction = whole - cm.sse(lo, s) - cm.sse(s, hi);
    if (reduction > best.reduction) {
      best.split = s;
      best.reduction = reduction;
    }
  }
  return best;
}

}  // namespace

SegmentationResult segment(const ScoreSeries& series, std::optional<double> penalty,
                           int max_changepoints) {
  const std::int64_t n = static_cast<std::int64_t>(series.size());
  if (n < 2) throw std::invalid_argument("segment needs at least 2 samples");
  if (max_changepoints < 0) throw std::invalid_argument("max_changepoints must be >= 0");

  const double beta = penalty.value_or(2.0 * std::log(static_cast<double>(n)));
  const CostModel cm(series.values);

  std::vector<std::int64_t> boundaries = {0, n};
  std::vector<CandidateSplit> candidates;
  candidates.push_back(best_split(cm, 0, n));

  while (static_cast<int>(boundaries.size()) - 2 < max_changepoints) {
    std::size_t best_i = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i].reduction < 0.0) continue;
      if (best_i == candidates.size() ||
          candidates[i].reduction > candidates[best_i].reduction ||
          (candidates[i].reduction == candidates[best_i].reduction &&
           candidates[i].split < candidates[best_i].split)) {
        best_i = i;
      }
    }
    if (best_i == candidates.size()) break;
    const CandidateSplit chosen = candidates[best_i];
    if (!(chosen.reduction > beta)) break;

    boundaries.insert(std::upper_bound(boundaries.begin(), boundaries.end(), chosen.split),
                      chosen.split);
    candidates[best_i] = best_split(cm, chosen.lo, chosen.split);
    candidates.push_back(best_split(cm, chosen.split, chosen.hi));
  }

  SegmentationResult out;
  out.penalty = beta;
  double sse_total = 0.0;
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    const std::int64_t a = boundaries[i], b = boundaries[i + 1];
    out.segment_means.push_back(cm.mean(a, b));
    sse_total += cm.sse(a, b);
    if (i + 2 < boundaries.size()) out.changepoints.push_back(b);
  }
  out.total_cost = sse_total + beta * static_cast<double>(out.changepoints.size());
  return out;
}

MatchReport compare(const std::vector<ChangeEvent>& online_events,
                    const SegmentationResult& offline, std::int64_t tolerance) {
  if (tolerance < 0) throw std::invalid_argument("tolerance must be >= 0");

  struct Candidate {
    std::int64_t dist;
    std::size_t on;
    std::size_t off;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < online_events.size(); ++i) {
    for (std::size_t j = 0; j < offline.changepoints.size(); ++j) {
      const std::int64_t d = online_events[i].index - offline.changepoints[j];
      const std::int64_t dist = d < 0 ? -d : d;
      if (dist <= tolerance) candidates.push_back({dist, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.on != b.on) return a.on < b.on;
    return a.off < b.off;
  });

  MatchReport report;
  std::vector<bool> on_used(online_events.size(), false);
  std::vector<bool> off_used(offline.changepoints.size(), false);
  for (const auto& c : candidates) {
    if (on_used[c.on] || off_used[c.off]) continue;
    on_used[c.on] = true;
    off_used[c.off] = true;
    report.matched.push_back({online_events[c.on].index, offline.changepoints[c.off],
                              online_events[c.on].index - offline.changepoints[c.off]});
  }
  std::sort(report.matched.begin(), report.matched.end(),
            [](const MatchedPair& a, const MatchedPair& b) {
              return a.online_index < b.online_index;
            });
  for (std::size_t i = 0; i < online_events.size(); ++i) {
    if (!on_used[i]) report.online_only.push_back(online_events[i].index);
  }
  for (std::size_t j = 0; j < offline.changepoints.size(); ++j) {
    if (!off_used[j]) report.offline_only.push_back(offline.changepoints[j]);
  }
  return report;
}

}  // namespace driftwatch
