#include "stieltjes/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "stieltjes/errors.hpp"

namespace stieltjes {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool constant_range(const MonotoneFn& M) { return M.min_value() == M.max_value(); }

// N restricted to the value range of M.  The restriction collapses the
// outward one-sided limits at the new endpoints, which is exactly the
// endpoint jump convention every identity below relies on.
MonotoneFn restrict_to_range(const MonotoneFn& N, const MonotoneFn& M) {
  double lo = M.min_value();
  double hi = M.max_value();
  if (!(N.domain().lo <= lo && hi <= N.domain().hi))
    throw CompositionError("integrator domain [" + fmt(N.domain().lo) + ", " +
                           fmt(N.domain().hi) + "] does not cover the value range [" + fmt(lo) +
                           ", " + fmt(hi) + "]");
  if (N.domain().lo == lo && N.domain().hi == hi) return N;
  return restrict_to(N, lo, hi);
}

// Prefix sums of the step parts.  strict selects the sum over levels
// strictly below z; otherwise levels up to and including z.  Summation order
// is fixed (ascending y) so paired strict/inclusive reads differ by exactly
// the one weight.
double step_below(const JumpSplit& js, bool minus_part, double z, bool strict) {
  double s = 0.0;
  for (const JumpSplitEntry& e : js.entries) {
    double w = minus_part ? e.delta_minus : e.delta_plus;
    if (w <= 0.0) continue;
    if (strict ? e.y < z : e.y <= z) s += w;
  }
  return s;
}

// Accumulated step function over the flat levels: right-continuous steps of
// the left jumps, or left-continuous steps of the right jumps.
MonotoneFn step_sum(const ClosedInterval& dom, const JumpSplit& js, bool minus_part) {
  std::vector<double> pos{dom.lo, dom.hi};
  for (const JumpSplitEntry& e : js.entries) {
    double w = minus_part ? e.delta_minus : e.delta_plus;
    if (w > 0.0) pos.push_back(e.y);
  }
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());

  std::vector<Breakpoint> knots;
  knots.reserve(pos.size());
  for (double z : pos) {
    double below = step_below(js, minus_part, z, true);
    double at = step_below(js, minus_part, z, false);
    if (minus_part)
      knots.push_back({z, below, at, at});
    else
      knots.push_back({z, below, below, at});
  }
  std::vector<PieceShape> gaps(pos.size() - 1, {SegmentKind::constant, 0.0});
  return assemble_monotone(dom, std::move(knots), std::move(gaps));
}

void require_level_inside(const MonotoneFn& N, double y) {
  if (!N.domain().contains(y))
    throw ParameterError("flat level " + fmt(y) + " outside the integrator domain [" +
                         fmt(N.domain().lo) + ", " + fmt(N.domain().hi) + "]");
}

}  // namespace

double JumpSplit::total() const {
  double s = 0.0;
  for (const JumpSplitEntry& e : entries) s += e.delta_minus + e.delta_plus;
  return s;
}

JumpSplit jump_split(const MonotoneFn& N, const FlatLevels& H) {
  JumpSplit out;
  out.entries.reserve(H.levels.size());
  for (const FlatLevel& lvl : H.levels) {
    require_level_inside(N, lvl.y);
    double l = N.eval(lvl.y, Side::left);
    double v = N.eval(lvl.y, Side::value);
    double r = N.eval(lvl.y, Side::right);
    out.entries.push_back({lvl.y, v - l, r - v});
  }
  return out;
}

Decomposition decompose(const MonotoneFn& N, const FlatLevels& H) {
  JumpSplit js = jump_split(N, H);
  MonotoneFn n2 = step_sum(N.domain(), js, true);
  MonotoneFn n3 = step_sum(N.domain(), js, false);

  // n1 = N - n2 - n3, assembled field by field on the merged knot grid.
  // Positive steps only occur at discontinuities of N, so every subtraction
  // happens at an existing N breakpoint and n1 stays increasing.
  std::vector<double> pos;
  for (const Breakpoint& b : N.breakpoints()) pos.push_back(b.x);
  for (const FlatLevel& lvl : H.levels) pos.push_back(lvl.y);
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());

  std::vector<Breakpoint> knots;
  knots.reserve(pos.size());
  for (double z : pos) {
    double l = N.eval(z, Side::left) - step_below(js, true, z, true) -
               step_below(js, false, z, true);
    double v = N.eval(z, Side::value) - step_below(js, true, z, false) -
               step_below(js, false, z, true);
    double r = N.eval(z, Side::right) - step_below(js, true, z, false) -
               step_below(js, false, z, false);
    knots.push_back({z, l, v, r});
  }

  const auto& nb = N.breakpoints();
  const auto& ns = N.segments();
  std::vector<PieceShape> gaps;
  gaps.reserve(pos.size() - 1);
  for (size_t k = 0; k + 1 < pos.size(); ++k) {
    size_t i = static_cast<size_t>(std::upper_bound(nb.begin(), nb.end(), pos[k],
                                                    [](double v, const Breakpoint& b) {
                                                      return v < b.x;
                                                    }) -
                                   nb.begin());
    i = i > 0 ? i - 1 : 0;
    if (i >= ns.size()) i = ns.size() - 1;
    gaps.push_back({ns[i].kind, ns[i].slope});
  }

  MonotoneFn n1 = assemble_monotone(N.domain(), std::move(knots), std::move(gaps));
  return {std::move(n1), std::move(n2), std::move(n3)};
}

double cov_lhs(const PiecewiseFn& f, const MonotoneFn& M, const MonotoneFn& N) {
  return integrate(f, measure_from(compose(N, M)));
}

CovTerms cov_rhs(const PiecewiseFn& f, const MonotoneFn& M, const MonotoneFn& N,
                 InverseSide side) {
  if (constant_range(M)) return {};
  MonotoneFn Nr = restrict_to_range(N, M);
  FlatLevels H = flat_levels(M);
  JumpSplit js = jump_split(Nr, H);
  Decomposition dec = decompose(Nr, H);
  MonotoneFn inv = side == InverseSide::left ? left_inverse(M) : right_inverse(M);

  CovTerms out;
  out.term_n1 = integrate(compose_with_monotone(f, inv), measure_from(dec.n1));
  for (size_t k = 0; k < H.levels.size(); ++k) {
    out.term_minus += f.eval(H.levels[k].x_left) * js.entries[k].delta_minus;
    out.term_plus += f.eval(H.levels[k].x_right) * js.entries[k].delta_plus;
  }
  return out;
}

namespace {

VerificationReport zero_report(const std::string& tag, const VerifyOptions& opts,
                               std::vector<TermValue> terms) {
  VerificationReport rep;
  rep.tag = tag;
  rep.tolerance = opts.tolerance;
  rep.rhs_terms = std::move(terms);
  rep.pass = true;
  return rep;
}

void finish_identity(VerificationReport& rep) {
  rep.rhs_total = 0.0;
  for (const TermValue& t : rep.rhs_terms) rep.rhs_total += t.value;
  rep.residual = rep.lhs - rep.rhs_total;
  rep.pass = std::abs(rep.residual) <= rep.tolerance;
}

// Continuity of N at the flat levels, in the sense the tag needs.  Returns
// the first offending level, if any.
enum class NeedAtFlats { continuous, right_continuous, left_continuous };

bool flats_ok(const MonotoneFn& Nr, const FlatLevels& H, NeedAtFlats need, double* offender) {
  for (const FlatLevel& lvl : H.levels) {
    double l = Nr.eval(lvl.y, Side::left);
    double v = Nr.eval(lvl.y, Side::value);
    double r = Nr.eval(lvl.y, Side::right);
    bool ok = true;
    switch (need) {
      case NeedAtFlats::continuous: ok = l == v && v == r; break;
      case NeedAtFlats::right_continuous: ok = v == r; break;
      case NeedAtFlats::left_continuous: ok = l == v; break;
    }
    if (!ok) {
      *offender = lvl.y;
      return false;
    }
  }
  return true;
}

void add_mass_witnesses(VerificationReport& rep, const MonotoneFn& M, const MonotoneFn& Nr,
                        bool sup_side) {
  LSMeasure nu = measure_from(Nr);
  LSMeasure lam = measure_from(compose(Nr, M));
  for (const FlatLevel& lvl : flat_levels(M).levels) {
    double x = 0.5 * (lvl.x_left + lvl.x_right);
    double push = sup_side ? preimage_mass_sup(nu, M, x) : preimage_mass(nu, M, x);
    double comp = mass(lam, IntervalQuery::closed(M.domain().lo, x));
    rep.witnesses.push_back({x, push, comp, push - comp});
  }
}

}  // namespace

VerificationReport verify_identity(const std::string& tag, const PiecewiseFn& fn,
                                   const MonotoneFn& M, const MonotoneFn& N,
                                   const VerifyOptions& opts) {
  VerificationReport rep;
  rep.tag = tag;
  rep.tolerance = opts.tolerance;

  if (tag == "eq5" || tag == "eq6") {
    if (constant_range(M))
      return zero_report(tag, opts,
                         {{"continuous_part", 0.0}, {"left_jump_sum", 0.0},
                          {"right_jump_sum", 0.0}});
    PiecewiseFn f = tag == "eq6" ? compose_with_monotone(fn, M) : fn;
    rep.lhs = cov_lhs(f, M, N);
    CovTerms terms = cov_rhs(f, M, N, opts.side);
    rep.rhs_terms = {{"continuous_part", terms.term_n1},
                     {"left_jump_sum", terms.term_minus},
                     {"right_jump_sum", terms.term_plus}};
    finish_identity(rep);
    return rep;
  }

  if (tag == "eq1") {
    if (constant_range(M)) return zero_report(tag, opts, {{"pushforward_integral", 0.0}});
    MonotoneFn Nr = restrict_to_range(N, M);
    FlatLevels H = flat_levels(M);
    double bad = 0.0;
    if (!flats_ok(Nr, H, NeedAtFlats::continuous, &bad)) {
      if (!opts.force)
        throw PreconditionError(
            "eq1 requires the integrator to be continuous at every flat level; violated at " +
                fmt(bad),
            bad);
      rep.forced = true;
    }
    MonotoneFn W = selector_inverse(M, opts.theta);
    rep.lhs = cov_lhs(fn, M, N);
    rep.rhs_terms = {{"pushforward_integral",
                      integrate(compose_with_monotone(fn, W), measure_from(Nr))}};
    finish_identity(rep);
    return rep;
  }

  if (tag == "eq2") {
    if (constant_range(M)) return zero_report(tag, opts, {{"range_integral", 0.0}});
    if (!M.is_continuous()) {
      double bad = 0.0;
      for (const Breakpoint& b : M.breakpoints())
        if (b.left != b.value || b.value != b.right) {
          bad = b.x;
          break;
        }
      if (!opts.force)
        throw PreconditionError(
            "eq2 requires a continuous inner function; discontinuity at " + fmt(bad), bad);
      rep.forced = true;
    }
    MonotoneFn Nr = restrict_to_range(N, M);
    rep.lhs = cov_lhs(compose_with_monotone(fn, M), M, N);
    rep.rhs_terms = {{"range_integral", integrate(fn, measure_from(Nr))}};
    finish_identity(rep);
    return rep;
  }

  if (tag == "eq3" || tag == "eq4") {
    bool sup_side = tag == "eq4";
    if (constant_range(M)) return zero_report(tag, opts, {{"pushforward_integral", 0.0}});
    MonotoneFn Nr = restrict_to_range(N, M);
    FlatLevels H = flat_levels(M);
    double bad = 0.0;
    if (!flats_ok(Nr, H,
                  sup_side ? NeedAtFlats::left_continuous : NeedAtFlats::right_continuous,
                  &bad)) {
      if (!opts.force)
        throw PreconditionError(std::string(tag == "eq3" ? "eq3" : "eq4") +
                                    " requires the integrator to be " +
                                    (sup_side ? "left" : "right") +
                                    "-continuous at every flat level; violated at " + fmt(bad),
                                bad);
      rep.forced = true;
    }
    MonotoneFn inv = sup_side ? right_inverse(M) : left_inverse(M);
    rep.lhs = cov_lhs(fn, M, N);
    rep.rhs_terms = {{"pushforward_integral",
                      integrate(compose_with_monotone(fn, inv), measure_from(Nr))}};
    finish_identity(rep);
    if (rep.forced) add_mass_witnesses(rep, M, Nr, sup_side);
    return rep;
  }

  throw ParameterError("unknown identity tag '" + tag +
                       "' (expected eq1, eq2, eq3, eq4, eq5 or eq6)");
}

std::vector<VerificationReport> check_inequalities(const PiecewiseFn& g, const MonotoneFn& M,
                                                   const MonotoneFn& N, double tol,
                                                   bool decreasing) {
  if (!is_monotone(g, !decreasing))
    throw ValidationError(std::string("integrand is not ") +
                          (decreasing ? "decreasing" : "increasing") + " as declared");

  auto make = [&](const char* tag, double lhs, std::vector<TermValue> terms, double slack) {
    VerificationReport rep;
    rep.tag = tag;
    rep.lhs = lhs;
    rep.rhs_terms = std::move(terms);
    for (const TermValue& t : rep.rhs_terms) rep.rhs_total += t.value;
    rep.residual = slack;
    rep.tolerance = tol;
    rep.pass = slack >= -tol;
    return rep;
  };

  std::vector<VerificationReport> out;
  if (constant_range(M)) {
    out.push_back(make("ineq7", 0.0,
                       {{"integral_via_inf_inverse", 0.0}, {"integral_via_sup_inverse", 0.0}},
                       0.0));
    out.push_back(make("ineq8", 0.0, {{"range_integral", 0.0}}, 0.0));
    out.push_back(make("ineq9", 0.0, {{"range_integral", 0.0}}, 0.0));
    return out;
  }

  LSMeasure lam = measure_from(compose(N, M));
  MonotoneFn Nr = restrict_to_range(N, M);
  LSMeasure nu = measure_from(Nr);

  double mid = integrate(g, lam);
  double via_inf = integrate(compose_with_monotone(g, left_inverse(M)), nu);
  double via_sup = integrate(compose_with_monotone(g, right_inverse(M)), nu);
  double slack7 = decreasing ? std::min(mid - via_sup, via_inf - mid)
                             : std::min(mid - via_inf, via_sup - mid);
  out.push_back(make("ineq7", mid,
                     {{"integral_via_inf_inverse", via_inf},
                      {"integral_via_sup_inverse", via_sup}},
                     slack7));

  if (M.is_left_continuous() || M.is_right_continuous()) {
    double lhs_gm = integrate(compose_with_monotone(g, M), lam);
    double rhs_gy = integrate(g, nu);
    if (M.is_left_continuous()) {
      double slack = decreasing ? lhs_gm - rhs_gy : rhs_gy - lhs_gm;
      out.push_back(make("ineq8", lhs_gm, {{"range_integral", rhs_gy}}, slack));
    }
    if (M.is_right_continuous()) {
      double slack = decreasing ? rhs_gy - lhs_gm : lhs_gm - rhs_gy;
      out.push_back(make("ineq9", lhs_gm, {{"range_integral", rhs_gy}}, slack));
    }
  }
  return out;
}

}  // namespace stieltjes
