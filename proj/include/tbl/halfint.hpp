#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "tbl/errors.hpp"

namespace tbl {

/// Exact coordinate on the shifted lattice Z' = Z + 1/2, stored as twice its value.
/// The stored integer is always odd; arithmetic never leaves the lattice.
class HalfInt {
 public:
  HalfInt() : twice_(1) {}
  explicit HalfInt(std::int64_t twice) : twice_(twice) {
    if ((twice_ & 1) == 0)
      throw config_error("HalfInt: " + std::to_string(twice) + "/2 is not a half-integer");
  }

  static HalfInt from_twice(std::int64_t twice) { return HalfInt(twice); }

  std::int64_t twice() const { return twice_; }
  double value() const { return 0.5 * static_cast<double>(twice_); }

  HalfInt operator+(std::int64_t n) const { return HalfInt(twice_ + 2 * n); }
  HalfInt operator-(std::int64_t n) const { return HalfInt(twice_ - 2 * n); }
  HalfInt operator-() const { return HalfInt(-twice_); }
  HalfInt& operator++() { twice_ += 2; return *this; }
  HalfInt& operator--() { twice_ -= 2; return *this; }

  // difference of two lattice points is an exact integer
  std::int64_t operator-(HalfInt o) const { return (twice_ - o.twice_) / 2; }

  auto operator<=>(const HalfInt&) const = default;

  /// "p/2" with p odd, the canonical textual form.
  std::string str() const { return std::to_string(twice_) + "/2"; }

  /// Parses "p/2" (p odd). Rejects anything else.
  static HalfInt parse(const std::string& text);

  /// Nearest lattice point to a real number; ties round up.
  static HalfInt nearest(double x);

 private:
  std::int64_t twice_;
};

inline bool operator<(HalfInt a, double x) { return a.value() < x; }
inline bool operator>(HalfInt a, double x) { return a.value() > x; }
inline bool operator<=(HalfInt a, double x) { return a.value() <= x; }
inline bool operator>=(HalfInt a, double x) { return a.value() >= x; }

}  // namespace tbl
