#pragma once

#include <map>
#include <optional>
#include <string>

#include "tbl/halfint.hpp"

namespace tbl {

/// Filling function sigma: Z' -> [0,1] together with a constructive certificate
/// for its left tail sum. Three kinds:
///   indicator          sigma(l) = 1 for l > 0, 0 for l < 0
///   fermi(u)           sigma(l) = 1/(1 + u^l), u in [0,1)
///   table              finite map, 0 beyond the right edge, and beyond the left
///                      edge either 0 or a declared geometric decay
/// Profiles whose left tail is summable but carries no computable bound are not
/// representable; every instance answers tail_sum_bound exactly or from its
/// declared decay.
class SigmaProfile {
 public:
  enum class Kind { indicator, fermi, table };
  enum class LeftTail { zero, geometric };

  static SigmaProfile indicator();
  static SigmaProfile fermi(double u);
  static SigmaProfile table(std::map<std::int64_t, double> values_by_twice,
                            LeftTail left = LeftTail::zero, double ratio = 0.0);

  Kind kind() const { return kind_; }
  double u() const { return u_; }

  /// sigma(l)
  double operator()(HalfInt l) const;

  /// Certified upper bound on sum_{l in Z', l <= -T} sigma(l). Finite for every
  /// real T, monotone nonincreasing, and -> 0 as T -> +inf.
  double tail_sum_bound(double T) const;

  /// Smallest T (in whole lattice steps from 1/2) with tail_sum_bound(T) <= eps.
  /// Throws resource_limit_error beyond the cap.
  double tail_cut(double eps, double cap = 1e7) const;

  /// True if sigma vanishes identically.
  bool is_zero() const;

  /// Stable short identifier for CSV keys and caches, e.g. "indicator", "fermi:0.5".
  const std::string& id() const { return id_; }

  std::string to_json() const;
  static SigmaProfile from_json(const std::string& text);

 private:
  SigmaProfile() = default;

  Kind kind_ = Kind::indicator;
  double u_ = 0.0;                            // fermi only
  std::map<std::int64_t, double> values_;    // table only, keyed by twice
  LeftTail left_ = LeftTail::zero;
  double ratio_ = 0.0;
  std::string id_;
};

}  // namespace tbl
