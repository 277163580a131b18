#pragma once

namespace stieltjes {

// Closed interval [lo, hi] with lo < hi (degenerate intervals are rejected
// wherever a ClosedInterval is used as a domain).
struct ClosedInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

// Interval query for measures: each endpoint independently open or closed.
// Degenerate queries (lo == hi, both ends closed) select a single point.
struct IntervalQuery {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  static IntervalQuery closed(double lo, double hi) { return {lo, hi, true, true}; }

  bool admits(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
  }
};

}  // namespace stieltjes
