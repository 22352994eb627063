#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace specising {

// Running max-shifted log-sum-exp accumulator with Kahan compensation.
// Deterministic: the result depends only on the order of add()/merge() calls.
class LogSumAccumulator {
 public:
  void add(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term > max_) {
      const double scale = std::exp(max_ - log_term);
      sum_ *= scale;
      c_ *= scale;
      max_ = log_term;
      kahan_add(1.0);
    } else {
      kahan_add(std::exp(log_term - max_));
    }
  }

  void merge(const LogSumAccumulator& other) {
    if (other.empty()) return;
    if (other.max_ > max_) {
      const double scale = std::exp(max_ - other.max_);
      sum_ *= scale;
      c_ *= scale;
      max_ = other.max_;
      kahan_add(other.sum_ - other.c_);
    } else {
      kahan_add((other.sum_ - other.c_) * std::exp(other.max_ - max_));
    }
  }

  bool empty() const { return max_ == -std::numeric_limits<double>::infinity(); }

  // log of the accumulated sum; -inf if nothing was added.
  double value() const {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_ - c_);
  }

 private:
  void kahan_add(double x) {
    const double y = x - c_;
    const double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }

  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double c_ = 0.0;  // Kahan residual: true sum = sum_ - c_
};

double log_sum_exp(std::span<const double> log_terms);

// Binary entropy in nats; H(0) = H(1) = 0 by continuity.
inline double binary_entropy(double a) {
  if (a <= 0.0 || a >= 1.0) return 0.0;
  return -a * std::log(a) - (1.0 - a) * std::log(1.0 - a);
}

inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Uniform integer in [0, n) by rejection; unbiased, deterministic per seed.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// requested <= 0 means "use all hardware threads".
int resolve_thread_count(int requested);

// Runs body(chunk) for chunk = 0..num_chunks-1 on up to `threads` workers.
// Caller owns per-chunk output slots and merges them in chunk order, so the
// combined result does not depend on the worker count.
void parallel_chunks(int num_chunks, int threads, const std::function<void(int)>& body);

}  // namespace specising
