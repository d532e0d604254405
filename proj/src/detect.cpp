#include "driftwatch/detect.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "driftwatch/rng.hpp"

namespace driftwatch {

void DetectorConfig::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("h must be > 0");
  if (reset_window < 1) throw std::invalid_argument("reset_window must be >= 1");
  if (!std::isfinite(theta0_init)) throw std::invalid_argument("theta0 must be finite");
}

const char* to_string(Direction d) {
  return d == Direction::positive ? "positive" : "negative";
}

std::optional<Direction> direction_from_string(const std::string& s) {
  if (s == "positive") return Direction::positive;
  if (s == "negative") return Direction::negative;
  return std::nullopt;
}

double sufficient_statistic(double y, double theta0, double theta1, double sigma) {
  return (theta1 - theta0) / (sigma * sigma) * (y - (theta0 + theta1) / 2.0);
}

Detector::Detector(const DetectorConfig& config) : config_(config) {
  config_.validate();
  theta0_ = config_.theta0_init;
  pos_.zero(theta0_ + config_.delta);
  neg_.zero(theta0_ - config_.delta);
  ring_.assign(static_cast<std::size_t>(config_.reset_window), 0.0);
}

std::optional<ChangeEvent> Detector::step(double y, UtcTime timestamp) {
  ++k_;
  ring_[ring_head_] = y;
  ring_head_ = (ring_head_ + 1) % ring_.size();
  if (ring_fill_ < ring_.size()) ++ring_fill_;

  pos_.accumulate(sufficient_statistic(y, theta0_, pos_.theta1, config_.sigma));
  neg_.accumulate(sufficient_statistic(y, theta0_, neg_.theta1, config_.sigma));

  const bool pos_hit = pos_.g >= config_.h;
  const bool neg_hit = neg_.g >= config_.h;
  if (!pos_hit && !neg_hit) return std::nullopt;

  Direction dir;
  double g_at_alarm;
  if (pos_hit && neg_hit) {
    if (pos_.g == neg_.g) {
      ++tie_count_;
      dir = Direction::positive;
      g_at_alarm = pos_.g;
    } else if (pos_.g > neg_.g) {
      dir = Direction::positive;
      g_at_alarm = pos_.g;
    } else {
      dir = Direction::negative;
      g_at_alarm = neg_.g;
    }
  } else if (pos_hit) {
    dir = Direction::positive;
    g_at_alarm = pos_.g;
  } else {
    dir = Direction::negative;
    g_at_alarm = neg_.g;
  }

  ChangeEvent ev;
  ev.index = k_;
  ev.timestamp = timestamp;
  ev.direction = dir;
  ev.theta0_before = theta0_;
  ev.g_at_alarm = g_at_alarm;

  assert(ring_fill_ > 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < ring_fill_; ++i) sum += ring_[i];
  reinitialize(sum / static_cast<double>(ring_fill_));
  ev.theta0_after = theta0_;
  return ev;
}

void Detector::reinitialize(double new_theta0) {
  theta0_ = new_theta0;
  pos_.zero(theta0_ + config_.delta);
  neg_.zero(theta0_ - config_.delta);
  ring_head_ = 0;
  ring_fill_ = 0;
}

DetectorRun run_detector(std::span<const ScoredPost> scores, const DetectorConfig& config) {
  Detector det(config);
  DetectorRun out;
  for (const auto& post : scores) {
    if (auto ev = det.step(post)) out.events.push_back(*ev);
  }
  out.samples = det.samples_seen();
  out.ties = det.tie_count();
  return out;
}

DetectorRun run_detector(std::span<const double> values, const DetectorConfig& config) {
  Detector det(config);
  DetectorRun out;
  for (double y : values) {
    if (auto ev = det.step(y, UtcTime{})) out.events.push_back(*ev);
  }
  out.samples = det.samples_seen();
  out.ties = det.tie_count();
  return out;
}

ArlEstimate estimate_arl(const DetectorConfig& config, double true_mean, int runs,
                         int max_len, std::uint64_t seed) {
  config.validate();
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");

  const double theta1_pos = config.theta0_init + config.delta;
  const double theta1_neg = config.theta0_init - config.delta;

  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t censored = 0;
  for (int r = 0; r < runs; ++r) {
    GaussianStream gen(splitmix64(seed ^ (0x5bd1e995ULL * static_cast<std::uint64_t>(r + 1))),
                       true_mean, config.sigma);
    CusumSide pos, neg;
    pos.zero(theta1_pos);
    neg.zero(theta1_neg);
    int stop = max_len;
    bool alarmed = false;
    for (int k = 1; k <= max_len; ++k) {
      const double y = gen.next();
      pos.accumulate(sufficient_statistic(y, config.theta0_init, theta1_pos, config.sigma));
      neg.accumulate(sufficient_statistic(y, config.theta0_init, theta1_neg, config.sigma));
      if (pos.g >= config.h || neg.g >= config.h) {
        stop = k;
        alarmed = true;
        break;
      }
    }
    if (!alarmed) ++censored;
    sum += stop;
    sum_sq += static_cast<double>(stop) * stop;
  }

  ArlEstimate est;
  const double n = static_cast<double>(runs);
  est.mean_run_length = sum / n;
  if (runs > 1) {
    const double var = (sum_sq - sum * sum / n) / (n - 1.0);
    est.std_error = std::sqrt(var > 0.0 ? var / n : 0.0);
  }
  est.censored_fraction = static_cast<double>(censored) / n;
  return est;
}

}  // namespace driftwatch
