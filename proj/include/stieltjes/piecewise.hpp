#pragma once

#include <array>
#include <vector>

#include "stieltjes/interval.hpp"
#include "stieltjes/measure.hpp"
#include "stieltjes/monotone.hpp"

namespace stieltjes {

/// Bounded piecewise-polynomial function (degree <= 3) with an explicit
/// stored value at every piece boundary.  Coefficients are in the piece's
/// local coordinate u = x - interval_left: a piece evaluates as
/// c0 + c1*u + c2*u^2 + c3*u^3 on its open interval.  The local origin keeps
/// every coefficient-times-power product at the scale of the function values
/// even when a composition with a steep inverse makes the coefficients large,
/// so integration never cancels catastrophically.  Evaluation at a boundary
/// returns the stored value, never a limit; the stored values are what
/// integrals against atoms see.
class PiecewiseFn {
 public:
  /// boundaries: strictly increasing, at least two (domain endpoints);
  /// pieces: one coefficient array per gap; point_values: one stored value
  /// per boundary.
  PiecewiseFn(std::vector<double> boundaries, std::vector<std::array<double, 4>> pieces,
              std::vector<double> point_values);

  /// Single global polynomial (continuous everywhere).
  static PiecewiseFn polynomial(ClosedInterval domain, std::array<double, 4> coeffs);
  static PiecewiseFn constant(ClosedInterval domain, double level);
  /// f(x) = x.
  static PiecewiseFn coordinate(ClosedInterval domain);

  ClosedInterval domain() const { return {boundaries_.front(), boundaries_.back()}; }
  const std::vector<double>& boundaries() const { return boundaries_; }
  const std::vector<std::array<double, 4>>& pieces() const { return pieces_; }
  const std::vector<double>& point_values() const { return point_values_; }

  /// Value at x: the stored value on a boundary, the covering piece's
  /// polynomial elsewhere.  Throws DomainError outside the domain.
  double eval(double x) const;

  /// One-sided limit at x (side == value returns eval).  The outward limits
  /// at the domain endpoints fall back to the stored values.
  double limit(double x, Side side) const;

 private:
  std::vector<double> boundaries_;
  std::vector<std::array<double, 4>> pieces_;
  std::vector<double> point_values_;

  void validate() const;
};

/// Pointwise sum on a shared domain (ParameterError when domains differ);
/// boundaries are merged, stored values add.
PiecewiseFn sum(const PiecewiseFn& a, const PiecewiseFn& b);

PiecewiseFn scale(const PiecewiseFn& f, double factor);

inline PiecewiseFn negate(const PiecewiseFn& f) { return scale(f, -1.0); }

/// Checks a monotonicity declaration exactly: every piece's derivative keeps
/// the declared sign on the closed piece span, and every stored boundary
/// value sits between the adjacent one-sided limits.
bool is_monotone(const PiecewiseFn& f, bool increasing);

/// Closed-form Lebesgue integral against a measure: sum of eval(atom) * mass
/// plus polynomial antiderivatives against the piecewise-constant density.
/// Requires f.domain to cover mu.domain (ParameterError).
double integrate(const PiecewiseFn& f, const LSMeasure& mu);

/// f composed with an increasing W as a PiecewiseFn on W.domain.  Piece
/// boundaries appear at W's breakpoints and wherever W's linear pieces cross
/// a boundary of f (solved in closed form); the stored value at a crossing is
/// f's stored value at that boundary.  Throws CompositionError when the value
/// range of W leaves f's domain.
PiecewiseFn compose_with_monotone(const PiecewiseFn& f, const MonotoneFn& W);

}  // namespace stieltjes
