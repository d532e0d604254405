#pragma once

// Independent reference implementations used as test oracles. Nothing here
// may call into the detector/segmentation code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

enum class Dir { up, down };

struct RefEvent {
  std::int64_t index;  // 1-based count of samples seen
  Dir dir;
  double theta0_before;
  double theta0_after;
  double g;
};

// Straight-line transcription of the two-sided CUSUM recursion with
// alarm-triggered re-initialization from the trailing-window mean. Keeps the
// whole history (test-only); the decision function is computed from the
// stored cumulative sums with an explicit prefix-minimum scan seeded by
// S_0 = 0 rather than the max(0, .) recursion.
inline std::vector<RefEvent> reference_cusum(const std::vector<double>& ys, double theta0,
                                             double delta, double sigma, double h,
                                             int window) {
  std::vector<RefEvent> events;
  std::vector<double> s_pos{0.0}, s_neg{0.0};  // S_0 = 0 sentinels
  std::vector<double> seen;                    // since last reset
  double th = theta0;

  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double y = ys[i];
    seen.push_back(y);
    const double t1p = th + delta;
    const double t1n = th - delta;
    s_pos.push_back(s_pos.back() + (t1p - th) / (sigma * sigma) * (y - (th + t1p) / 2.0));
    s_neg.push_back(s_neg.back() + (t1n - th) / (sigma * sigma) * (y - (th + t1n) / 2.0));

    double m_pos = s_pos[0], m_neg = s_neg[0];
    for (const double v : s_pos) m_pos = std::min(m_pos, v);
    for (const double v : s_neg) m_neg = std::min(m_neg, v);
    const double g_pos = s_pos.back() - m_pos;
    const double g_neg = s_neg.back() - m_neg;

    if (g_pos >= h || g_neg >= h) {
      RefEvent ev;
      ev.index = static_cast<std::int64_t>(i) + 1;
      ev.dir = g_pos >= g_neg ? Dir::up : Dir::down;
      ev.g = std::max(g_pos, g_neg);
      ev.theta0_before = th;
      const std::size_t take = std::min<std::size_t>(seen.size(), static_cast<std::size_t>(window));
      double sum = 0.0;
      for (std::size_t j = seen.size() - take; j < seen.size(); ++j) sum += seen[j];
      th = sum / static_cast<double>(take);
      ev.theta0_after = th;
      events.push_back(ev);
      s_pos = {0.0};
      s_neg = {0.0};
      seen.clear();
    }
  }
  return events;
}

// Marsaglia polar method on the 32-bit mt19937: a different exact N(mu,
// sigma^2) sampler than the library's Box-Muller + mt19937_64 path.
class PolarGaussian {
 public:
  PolarGaussian(std::uint32_t seed, double mu, double sigma)
      : eng_(seed), mu_(mu), sigma_(sigma) {}

  double next() {
    if (have_) {
      have_ = false;
      return mu_ + sigma_ * spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_ = true;
    return mu_ + sigma_ * (u * f);
  }

 private:
  double uniform() { return (static_cast<double>(eng_()) + 0.5) / 4294967296.0; }

  std::mt19937 eng_;
  double mu_, sigma_;
  bool have_ = false;
  double spare_ = 0.0;
};

// One-shot (no reset) two-sided stopping time on a supplied stream; returns
// max_len when no alarm fires.
inline int reference_stopping_time(const std::vector<double>& ys, double theta0,
                                   double delta, double sigma, double h) {
  double sp = 0.0, sn = 0.0, mp = 0.0, mn = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double y = ys[i];
    sp += delta / (sigma * sigma) * (y - theta0 - delta / 2.0);
    sn += -delta / (sigma * sigma) * (y - theta0 + delta / 2.0);
    mp = std::min(mp, sp);
    mn = std::min(mn, sn);
    if (sp - mp >= h || sn - mn >= h) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(ys.size());
}

// Exhaustive minimum of the penalized squared-error segmentation objective
// over all changepoint placements with at most max_cp changepoints.
// Changepoints use the 1-based "samples before the boundary" convention.
struct ExhaustiveResult {
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> changepoints;
};

inline double sse_of(const std::vector<double>& v, std::size_t a, std::size_t b) {
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = a; i < b; ++i) {
    sum += v[i];
    sum_sq += v[i] * v[i];
  }
  const double n = static_cast<double>(b - a);
  return sum_sq - sum * sum / n;
}

inline void exhaustive_rec(const std::vector<double>& v, double beta, int max_cp,
                           std::size_t start, std::vector<std::int64_t>& current,
                           double cost_so_far, ExhaustiveResult& best) {
  // Close the final segment.
  const double total = cost_so_far + sse_of(v, start, v.size()) +
                       beta * static_cast<double>(current.size());
  if (total < best.best_cost) {
    best.best_cost = total;
    best.changepoints = current;
  }
  if (static_cast<int>(current.size()) >= max_cp) return;
  for (std::size_t cp = start + 1; cp < v.size(); ++cp) {
    current.push_back(static_cast<std::int64_t>(cp));
    exhaustive_rec(v, beta, max_cp, cp, current, cost_so_far + sse_of(v, start, cp), best);
    current.pop_back();
  }
}

inline ExhaustiveResult exhaustive_segment(const std::vector<double>& v, double beta,
                                           int max_cp) {
  ExhaustiveResult best;
  std::vector<std::int64_t> current;
  exhaustive_rec(v, beta, max_cp, 0, current, 0.0, best);
  return best;
}

// Brute-force trailing mean.
inline std::vector<double> brute_moving_average(const std::vector<double>& v, int window) {
  std::vector<double> out(v.size(), std::numeric_limits<double>::quiet_NaN());
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < w) continue;
    double sum = 0.0;
    for (std::size_t j = i + 1 - w; j <= i; ++j) sum += v[j];
    out[i] = sum / window;
  }
  return out;
}

}  // namespace oracle
