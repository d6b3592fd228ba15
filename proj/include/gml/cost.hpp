#pragma once

#include <compare>
#include <string>

#include "gml/errors.hpp"

namespace gml {

/// Structural cost of a regime transition: a nonnegative real or the
/// distinguished INFINITE sentinel. Addition absorbs INFINITE.
class Cost {
 public:
  Cost() : value_(0.0), infinite_(false) {}

  static Cost finite(double v) {
    if (!(v >= 0.0)) throw InvalidParams("cost must be nonnegative, got " + std::to_string(v));
    Cost c;
    c.value_ = v;
    return c;
  }

  static Cost infinite() {
    Cost c;
    c.infinite_ = true;
    return c;
  }

  bool is_infinite() const { return infinite_; }

  /// Finite value; throws when the cost is INFINITE.
  double value() const {
    if (infinite_) throw InvalidParams("cost is INFINITE");
    return value_;
  }

  Cost operator+(const Cost& other) const {
    if (infinite_ || other.infinite_) return infinite();
    return finite(value_ + other.value_);
  }
  Cost& operator+=(const Cost& other) { return *this = *this + other; }

  bool operator==(const Cost& other) const {
    if (infinite_ != other.infinite_) return false;
    return infinite_ || value_ == other.value_;
  }

  std::string str() const { return infinite_ ? "inf" : std::to_string(value_); }

 private:
  double value_;
  bool infinite_;
};

}  // namespace gml
