#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace driftwatch {

// splitmix64; used to expand user seeds into engine seeds so that
// consecutive run indices give decorrelated streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic N(mu, sigma^2) stream: mt19937_64 + explicit Box-Muller.
// std::normal_distribution is implementation-defined, so golden values in
// tests go through this instead.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, double mu, double sigma)
      : engine_(seed), mu_(mu), sigma_(sigma) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return mu_ + sigma_ * spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return mu_ + sigma_ * (r * std::cos(a));
  }

  void retarget(double mu, double sigma) {
    mu_ = mu;
    sigma_ = sigma;
  }

 private:
  double uniform01() {  // in (0, 1]
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double mu_;
  double sigma_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace driftwatch
