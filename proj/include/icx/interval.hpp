#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace icx {

/// Half-open interval [lo, hi). A cell touching the global right endpoint of
/// the support is stored as [lo, hi] with right_closed = true so that
/// membership of a realized value at the endpoint is well defined.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool right_closed = false;

  bool contains(double x) const {
    return x >= lo && (x < hi || (right_closed && x == hi));
  }
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Finite disjoint union of intervals, kept sorted by lo with adjacent parts
/// merged. Equality is canonical-form equality.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> parts);
  explicit IntervalSet(std::vector<Interval> parts);
  static IntervalSet single(double lo, double hi, bool right_closed = false);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(double x) const;
  double total_length() const;

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  /// Complement within [lo, hi]; the rightmost gap touching hi is closed.
  IntervalSet complement(double lo, double hi) const;

  bool operator==(const IntervalSet&) const = default;

  std::string to_string() const;

 private:
  void normalize();
  std::vector<Interval> parts_;
};

}  // namespace icx
