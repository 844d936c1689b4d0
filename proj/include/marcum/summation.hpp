#pragma once

#include <cmath>

namespace marcum {

/// Neumaier's variant of Kahan summation; robust when an addend exceeds the
/// running sum in magnitude.
template <typename Value>
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(Value initial) : sum_(initial) {}

  constexpr CompensatedSum& operator+=(Value value) {
    const Value t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  constexpr Value value() const { return sum_ + compensation_; }

 private:
  Value sum_{0};
  Value compensation_{0};
};

}  // namespace marcum
