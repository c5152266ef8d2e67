/**
 * @file summation.hpp
 * @brief Compensated accumulation for history sums.
 */
#pragma once

#ifdef __FAST_MATH__
#error "compensated summation is defeated by -ffast-math"
#endif

#include <cmath>

namespace tfode {

/// Neumaier variant of Kahan summation: the carry also captures the case
/// where the incoming term is larger than the running sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }

  [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace tfode
