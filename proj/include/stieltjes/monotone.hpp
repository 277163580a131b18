#pragma once

#include <vector>

#include "stieltjes/interval.hpp"

namespace stieltjes {

/// One-sided evaluation selector: left limit, stored value, right limit.
enum class Side { left, value, right };

/// Breakpoint of a monotone function: position plus the left limit, the
/// function value, and the right limit there (left <= value <= right).
/// At the domain's lo the left limit equals the value; at hi the right
/// limit equals the value.
struct Breakpoint {
  double x = 0.0;
  double left = 0.0;
  double value = 0.0;
  double right = 0.0;
};

enum class SegmentKind { linear, constant };

/// Continuous piece on the open interval between two adjacent breakpoints.
/// Evaluation on (x_i, x_{i+1}) is anchor + slope * (x - x_i); the anchor
/// therefore equals the left breakpoint's right limit, and the limit at the
/// far end must meet the next breakpoint's left field.  A constant piece has
/// slope exactly zero.
struct Segment {
  SegmentKind kind = SegmentKind::constant;
  double slope = 0.0;
  double anchor = 0.0;
};

/// Increasing real function on a closed interval, represented exactly as
/// breakpoints (jump triples) joined by linear or constant pieces.  Values
/// are immutable after construction; construction validates the full
/// invariant set and throws ValidationError on the first violation.
///
/// Comparisons between stored values are exact; no epsilon is applied when
/// deciding whether a function is flat or discontinuous at a point.  The only
/// tolerance in validation is the far-end consistency check of a linear piece
/// against the next breakpoint, which absorbs the rounding of slope * dx.
class MonotoneFn {
 public:
  MonotoneFn(ClosedInterval domain, std::vector<Breakpoint> breakpoints,
             std::vector<Segment> segments);

  /// Straight line value_at_lo + slope * (x - lo), slope >= 0.
  static MonotoneFn linear(ClosedInterval domain, double slope, double value_at_lo);
  static MonotoneFn constant(ClosedInterval domain, double level);
  static MonotoneFn identity(ClosedInterval domain);

  const ClosedInterval& domain() const { return domain_; }
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  const std::vector<Segment>& segments() const { return segments_; }

  double min_value() const { return breakpoints_.front().value; }
  double max_value() const { return breakpoints_.back().value; }

  /// One-sided evaluation; throws DomainError outside the domain.
  double eval(double x, Side side = Side::value) const;

  /// True when every breakpoint satisfies left == value == right.
  bool is_continuous() const;
  /// True when every breakpoint satisfies left == value (no left jumps).
  bool is_left_continuous() const;
  /// True when every breakpoint satisfies value == right (no right jumps).
  bool is_right_continuous() const;

 private:
  ClosedInterval domain_;
  std::vector<Breakpoint> breakpoints_;
  std::vector<Segment> segments_;

  void validate() const;
};

/// Free-function spelling of one-sided evaluation.
inline double eval_at(const MonotoneFn& fn, double x, Side side = Side::value) {
  return fn.eval(x, side);
}

/// Maximal constancy interval: the function equals y on the open interval
/// (x_left, x_right); x_left and x_right are the infimum and supremum of the
/// level set, i.e. the values of the left and right generalized inverses at y.
struct FlatLevel {
  double y = 0.0;
  double x_left = 0.0;
  double x_right = 0.0;
};

/// All flat levels of a monotone function, in strictly increasing y order
/// with pairwise disjoint intervals.
struct FlatLevels {
  std::vector<FlatLevel> levels;

  bool empty() const { return levels.empty(); }
  bool contains(double y) const;
};

/// Levels at which the preimage of M has more than one point.  A globally
/// constant M yields the single level {M(lo), lo, hi}.
FlatLevels flat_levels(const MonotoneFn& M);

/// Composition N(M(x)) with the induced one-sided limits: where M strictly
/// increases into x the left limit is N(M(x-)-); where M is constant on a
/// left neighborhood it is N(M(x-)).  Mirrored on the right.  New breakpoints
/// appear where M crosses a breakpoint position of N; the crossings are
/// solved in closed form.  Throws CompositionError when the value range of M
/// is not contained in the domain of N.
MonotoneFn compose(const MonotoneFn& N, const MonotoneFn& M);

/// Left-continuous generalized inverse X(y) = inf{ x : y <= M(x) } on
/// [M(lo), M(hi)].  Flats of M become jumps of X; jumps of M become flats.
MonotoneFn left_inverse(const MonotoneFn& M);

/// Right-continuous generalized inverse Xi(y) = sup{ x : M(x) <= y }.
MonotoneFn right_inverse(const MonotoneFn& M);

/// Canonical one-parameter family between the extreme inverses:
/// W = X + theta * (Xi - X).  theta must lie in [0, 1] (ParameterError
/// otherwise); theta == 0 and theta == 1 return X and Xi exactly.  W differs
/// from the extremes only in its values at flat levels of M, hence every W is
/// itself a generalized inverse of M.
MonotoneFn selector_inverse(const MonotoneFn& M, double theta);

/// Pointwise inf{ x : y <= M(x) } without constructing the inverse function.
/// Requires y in [M(lo), M(hi)].
double inf_preimage(const MonotoneFn& M, double y);

/// Pointwise sup{ x : M(x) <= y }.
double sup_preimage(const MonotoneFn& M, double y);

/// True when M is constant on some right neighborhood (x, x + eps); false at
/// x == hi.  Exact structural query, no sampling.
bool constant_on_right(const MonotoneFn& M, double x);

/// Mirrored query on the left side; false at x == lo.
bool constant_on_left(const MonotoneFn& M, double x);

/// Restriction of M to [lo, hi] (a subinterval of M's domain, lo < hi).
/// The new endpoints adopt the one-sided-limit conventions of the
/// representation: left == value at lo and right == value at hi.
MonotoneFn restrict_to(const MonotoneFn& M, double lo, double hi);

/// Shape of the piece between two knots; the anchor is derived from the left
/// knot's right limit during assembly.
struct PieceShape {
  SegmentKind kind = SegmentKind::constant;
  double slope = 0.0;
};

/// Builds a MonotoneFn from knots plus the piece shapes between them (gaps
/// must number one less than knots).  Segment anchors are derived, the
/// endpoint conventions are applied, and interior knots that merely continue
/// the surrounding piece are dropped.  Validation runs as usual.
MonotoneFn assemble_monotone(ClosedInterval domain, std::vector<Breakpoint> knots,
                             std::vector<PieceShape> gaps);

}  // namespace stieltjes
