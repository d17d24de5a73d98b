#pragma once

#include <cmath>

namespace stmir {

// Neumaier's variant of Kahan compensated summation.
template <class Real>
class BasicCompensatedSum {
 public:
  BasicCompensatedSum& operator+=(Real v) {
    Real t = sum_ + v;
    comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
    return *this;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

using CompensatedSum = BasicCompensatedSum<double>;

}  // namespace stmir
