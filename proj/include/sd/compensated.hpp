#pragma once

#include <complex>

namespace sd {

/*!
  Kahan-Babuska (Neumaier) summation.

  Tracks the rounding error of every addition and adds it back when the sum is
  read. Unlike plain Kahan summation it stays accurate when an addend is larger
  in magnitude than the running sum.
*/
template <typename Real>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(Real value) {
    const Real t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  Real value() const { return sum_ + compensation_; }

 private:
  Real sum_{0};
  Real compensation_{0};
};

/// Complex sum with independently compensated real and imaginary parts.
template <typename Real>
class CompensatedComplexSum {
 public:
  CompensatedComplexSum& operator+=(std::complex<Real> value) {
    re_ += value.real();
    im_ += value.imag();
    return *this;
  }

  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

}  // namespace sd
