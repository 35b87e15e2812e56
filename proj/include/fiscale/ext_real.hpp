#pragma once

#include <limits>

#include "fiscale/errors.hpp"

namespace fiscale {

// Extended nonnegative real: a finite value or a tagged +infinity.
// Infinity is a state, never a floating-point overflow.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : value_(v), finite_(true) {}  // NOLINT: implicit by design

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.finite_ = false;
    return r;
  }

  constexpr bool finite() const { return finite_; }

  double value() const {
    if (!finite_) throw ValidationError("ExtReal: value() on infinite");
    return value_;
  }

  constexpr double value_or_inf() const {
    return finite_ ? value_ : std::numeric_limits<double>::infinity();
  }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool finite_ = true;
};

}  // namespace fiscale
