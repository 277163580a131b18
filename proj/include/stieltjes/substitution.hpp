#pragma once

#include <string>
#include <vector>

#include "stieltjes/measure.hpp"
#include "stieltjes/monotone.hpp"
#include "stieltjes/piecewise.hpp"

namespace stieltjes {

/// One-sided jumps of an integrator N at a flat level y of the inner
/// function: delta_minus = N(y) - N(y-), delta_plus = N(y+) - N(y).  Both are
/// nonnegative for increasing N.  At N's own domain endpoints the outward
/// jumps vanish by the representation's endpoint conventions.
struct JumpSplitEntry {
  double y = 0.0;
  double delta_minus = 0.0;
  double delta_plus = 0.0;
};

struct JumpSplit {
  std::vector<JumpSplitEntry> entries;
  double total() const;
};

/// Split of an integrator N into a part continuous at every flat level (n1)
/// plus the accumulated left jumps as right-continuous steps (n2) and the
/// accumulated right jumps as left-continuous steps (n3).  n1 + n2 + n3
/// reproduces N exactly, field by field; all three are increasing.
struct Decomposition {
  MonotoneFn n1;
  MonotoneFn n2;
  MonotoneFn n3;
};

enum class InverseSide { left, right };

/// Named parts of the substitution identity's right side.
struct CovTerms {
  double term_n1 = 0.0;     // integral of f(inverse) against the n1 measure
  double term_minus = 0.0;  // sum of f(inf preimage) * left jump over flats
  double term_plus = 0.0;   // sum of f(sup preimage) * right jump over flats
  double total() const { return term_n1 + term_minus + term_plus; }
};

struct TermValue {
  std::string name;
  double value = 0.0;
};

/// Mass-comparison record from a forced verification whose precondition
/// fails: pushforward mass and composed-measure mass of the same prefix
/// interval, probed inside a flat run where the two can disagree.
struct MassWitness {
  double x = 0.0;
  double pushforward = 0.0;
  double composed = 0.0;
  double gap = 0.0;
};

struct VerificationReport {
  std::string tag;  // eq1..eq6, ineq7..ineq9
  double lhs = 0.0;
  std::vector<TermValue> rhs_terms;
  double rhs_total = 0.0;
  /// Identities: lhs - rhs_total.  Inequalities: the worst signed slack
  /// (negative means violated).
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool forced = false;
  std::vector<MassWitness> witnesses;
};

struct VerifyOptions {
  double theta = 0.0;                    // selector parameter (eq1)
  InverseSide side = InverseSide::left;  // inverse used in the n1 term (eq5, eq6)
  bool force = false;                    // compute despite a failed precondition
  double tolerance = 1e-9;
};

/// Exact one-sided jumps of N at each flat level.  Throws ParameterError
/// when a level lies outside N's domain.
JumpSplit jump_split(const MonotoneFn& N, const FlatLevels& H);

/// Builds the three-part split of N over the flat levels.
Decomposition decompose(const MonotoneFn& N, const FlatLevels& H);

/// Left side of the substitution identity: the integral of f against the
/// measure of the composition N(M(.)).
double cov_lhs(const PiecewiseFn& f, const MonotoneFn& M, const MonotoneFn& N);

/// Right side, in three named terms; `side` selects which generalized
/// inverse feeds the n1 integral (the result is the same either way, which
/// is itself a tested property).  A constant M yields all-zero terms: its
/// value range carries no mass and both endpoint jump conventions collapse
/// the sums.
CovTerms cov_rhs(const PiecewiseFn& f, const MonotoneFn& M, const MonotoneFn& N,
                 InverseSide side);

/// Evaluates one tagged identity and reports both sides.
///   eq5: the general substitution rule, no precondition.
///   eq6: eq5 with the integrand built internally as fn composed with M.
///   eq1: single pushforward integral with W = selector_inverse(M, theta);
///        requires N continuous at every flat level.
///   eq2: range substitution; requires M continuous.
///   eq3: pushforward under the left inverse; requires N right-continuous at
///        every flat level.
///   eq4: mirror of eq3 under the right inverse; requires N left-continuous.
/// A failed precondition throws PreconditionError naming the offending level
/// unless options.force is set, in which case the report is computed anyway,
/// marked forced, and (for eq3/eq4) carries per-flat mass witnesses.
VerificationReport verify_identity(const std::string& tag, const PiecewiseFn& fn,
                                   const MonotoneFn& M, const MonotoneFn& N,
                                   const VerifyOptions& options = {});

/// Monotone-integrand inequality reports: the two-sided bound through the
/// generalized inverses (ineq7) always; the one-sided comparisons against
/// the range integral when M is left-continuous (ineq8) or right-continuous
/// (ineq9).  `decreasing` declares g decreasing and flips every direction.
/// Throws ValidationError when g does not match the declaration.
std::vector<VerificationReport> check_inequalities(const PiecewiseFn& g, const MonotoneFn& M,
                                                   const MonotoneFn& N, double tol,
                                                   bool decreasing = false);

}  // namespace stieltjes
