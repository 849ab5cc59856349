#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mleak {

enum class Unit { Nats, Bits };

inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline const char* unit_name(Unit u) { return u == Unit::Bits ? "bits" : "nats"; }

// Nonnegative extended real stored in nats. Bits only on the way out.
class LeakageValue {
 public:
  constexpr LeakageValue() = default;
  static LeakageValue nats(double v) { return LeakageValue(clean(v)); }
  static LeakageValue bits(double v) { return LeakageValue(clean(v * kLn2)); }
  static LeakageValue infinite() { return LeakageValue(kInf); }

  double nats() const { return v_; }
  double bits() const { return v_ / kLn2; }
  double in(Unit u) const { return u == Unit::Bits ? bits() : nats(); }
  bool is_infinite() const { return std::isinf(v_); }

  friend bool operator==(LeakageValue a, LeakageValue b) { return a.v_ == b.v_; }
  friend auto operator<=>(LeakageValue a, LeakageValue b) { return a.v_ <=> b.v_; }

 private:
  explicit constexpr LeakageValue(double v) : v_(v) {}
  // log of a ratio that is 1 in exact arithmetic lands within a few ulps of 0.
  static double clean(double v) {
    if (std::isnan(v)) throw std::logic_error("leakage value is NaN");
    return v < 4.0 * std::numeric_limits<double>::epsilon() ? 0.0 : v;
  }
  double v_ = 0.0;
};

}  // namespace mleak
