#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftwatch/lexicon.hpp"
#include "driftwatch/time.hpp"

namespace driftwatch {

struct DetectorConfig {
  double theta0_init = -0.5;  // initial pre-change mean
  double delta = 0.5;         // change magnitude; theta1 = theta0 +/- delta
  double sigma = 1.0;         // assumed-known noise std
  double h = 20.0;            // detection threshold
  int reset_window = 50;      // trailing observations averaged at re-init

  // Throws std::invalid_argument on delta/sigma/h <= 0 or reset_window < 1.
  void validate() const;
};

enum class Direction { positive, negative };

const char* to_string(Direction d);
std::optional<Direction> direction_from_string(const std::string& s);

// Gaussian mean-change log-likelihood increment:
//   s = ((theta1 - theta0) / sigma^2) * (y - (theta0 + theta1) / 2)
double sufficient_statistic(double y, double theta0, double theta1, double sigma);

// One one-sided CUSUM. m tracks the running minimum of S with an implicit
// S_0 = 0, so g = S - m is the usual non-negative decision function.
struct CusumSide {
  double S = 0.0;
  double m = 0.0;
  double g = 0.0;
  double theta1 = 0.0;

  void accumulate(double s) {
    S += s;
    if (S < m) m = S;
    g = S - m;
  }

  void zero(double new_theta1) {
    S = m = g = 0.0;
    theta1 = new_theta1;
  }
};

struct ChangeEvent {
  std::int64_t index = 0;  // stopping time: 1-based count of samples seen
  UtcTime timestamp{};     // created_at of the triggering post
  Direction direction = Direction::positive;
  double theta0_before = 0.0;
  double theta0_after = 0.0;
  double g_at_alarm = 0.0;
};

// Two-sided CUSUM with alarm-triggered resets. step() must be called
// serially in stream order; the object is single-owner mutable state.
class Detector {
 public:
  explicit Detector(const DetectorConfig& config);

  // Feeds one observation. Returns the alarm fired at this sample, if any.
  // On alarm the detector has already re-initialized: theta0 becomes the
  // mean of the trailing ring (alarm sample included), both sides zero out,
  // the ring clears. delta/sigma/h stay fixed.
  std::optional<ChangeEvent> step(double y, UtcTime timestamp);
  std::optional<ChangeEvent> step(const ScoredPost& post) {
    return step(static_cast<double>(post.score), post.created_at);
  }

  const DetectorConfig& config() const { return config_; }
  double theta0() const { return theta0_; }
  const CusumSide& pos() const { return pos_; }
  const CusumSide& neg() const { return neg_; }
  std::int64_t samples_seen() const { return k_; }
  std::int64_t ring_fill() const { return static_cast<std::int64_t>(ring_fill_); }
  std::uint64_t tie_count() const { return tie_count_; }

 private:
  void reinitialize(double new_theta0);

  DetectorConfig config_;
  double theta0_;
  CusumSide pos_;
  CusumSide neg_;
  std::int64_t k_ = 0;
  std::vector<double> ring_;  // fixed capacity reset_window
  std::size_t ring_head_ = 0;
  std::size_t ring_fill_ = 0;
  std::uint64_t tie_count_ = 0;
};

struct DetectorRun {
  std::vector<ChangeEvent> events;
  std::int64_t samples = 0;
  std::uint64_t ties = 0;
};

// Single pass over a completed score sequence. Memory stays O(reset_window)
// plus the returned events.
DetectorRun run_detector(std::span<const ScoredPost> scores, const DetectorConfig& config);
DetectorRun run_detector(std::span<const double> values, const DetectorConfig& config);

struct ArlEstimate {
  double mean_run_length = 0.0;
  double std_error = 0.0;
  double censored_fraction = 0.0;
};

// Monte Carlo average run length: `runs` independent N(true_mean, sigma^2)
// streams through a one-shot (no reset) two-sided detector. Runs that never
// alarm within max_len count as max_len and feed censored_fraction.
// Deterministic for a given seed; run r uses a substream derived from
// (seed, r), so results do not depend on scheduling.
ArlEstimate estimate_arl(const DetectorConfig& config, double true_mean, int runs,
                         int max_len, std::uint64_t seed);

}  // namespace driftwatch
