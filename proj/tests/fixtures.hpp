#pragma once

// Closed-form instances shared across the test binaries.  The plateau family
// is the canonical worked example: a continuous inner function with one flat
// run meeting an outer integrator that jumps exactly at the flat level, with
// the jump split between the two sides controlled by the stored value.

#include "stieltjes/monotone.hpp"
#include "stieltjes/piecewise.hpp"

namespace fixtures {

using stieltjes::Breakpoint;
using stieltjes::ClosedInterval;
using stieltjes::MonotoneFn;
using stieltjes::PiecewiseFn;
using stieltjes::Segment;
using stieltjes::SegmentKind;

// Identity slope up to 1, flat at level 1 on [1, 2], identity slope after;
// continuous on [0, 3] with values in [0, 2].
inline MonotoneFn plateau_M() {
  return MonotoneFn({0.0, 3.0},
                    {{0.0, 0.0, 0.0, 0.0},
                     {1.0, 1.0, 1.0, 1.0},
                     {2.0, 1.0, 1.0, 1.0},
                     {3.0, 2.0, 2.0, 2.0}},
                    {{SegmentKind::linear, 1.0, 0.0},
                     {SegmentKind::constant, 0.0, 1.0},
                     {SegmentKind::linear, 1.0, 1.0}});
}

// N(y) = y below 1 and y + 1 above 1 on [0, 2], with N(1) adjustable inside
// the jump: 1.5 splits the jump evenly, 2.0 makes N right-continuous at 1,
// 1.0 makes it left-continuous.
inline MonotoneFn plateau_N(double value_at_one) {
  return MonotoneFn({0.0, 2.0},
                    {{0.0, 0.0, 0.0, 0.0},
                     {1.0, 1.0, value_at_one, 2.0},
                     {2.0, 3.0, 3.0, 3.0}},
                    {{SegmentKind::linear, 1.0, 0.0}, {SegmentKind::linear, 1.0, 2.0}});
}

// f(x) = x on a domain covering both the plateau domain and its value range.
inline PiecewiseFn coordinate_f() { return PiecewiseFn::coordinate({0.0, 3.0}); }

// Inner function with a two-sided jump and no flats: x on [0, 1), the triple
// (1, 1.25, 1.5) at 1, then x + 0.5 on (1, 2].
inline MonotoneFn jumpy_M() {
  return MonotoneFn({0.0, 2.0},
                    {{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.25, 1.5}, {2.0, 2.5, 2.5, 2.5}},
                    {{SegmentKind::linear, 1.0, 0.0}, {SegmentKind::linear, 1.0, 1.5}});
}

// Left-continuous inner function: x on [0, 1] with M(1) = 1, then x + 1 on
// (1, 2].
inline MonotoneFn leftcont_M() {
  return MonotoneFn({0.0, 2.0},
                    {{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 2.0}, {2.0, 3.0, 3.0, 3.0}},
                    {{SegmentKind::linear, 1.0, 0.0}, {SegmentKind::linear, 1.0, 2.0}});
}

}  // namespace fixtures
