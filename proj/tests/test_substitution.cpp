#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/generator.hpp"
#include "stieltjes/measure.hpp"
#include "stieltjes/substitution.hpp"

using namespace stieltjes;

namespace {

const MonotoneFn kM = fixtures::plateau_M();
const FlatLevels kH = flat_levels(kM);

}  // namespace

TEST_CASE("jump split of the plateau family") {
  JumpSplit mid = jump_split(fixtures::plateau_N(1.5), kH);
  REQUIRE(mid.entries.size() == 1);
  CHECK(mid.entries[0].y == 1.0);
  CHECK(mid.entries[0].delta_minus == 0.5);
  CHECK(mid.entries[0].delta_plus == 0.5);
  CHECK(mid.total() == 1.0);

  JumpSplit rc = jump_split(fixtures::plateau_N(2.0), kH);
  CHECK(rc.entries[0].delta_minus == 1.0);
  CHECK(rc.entries[0].delta_plus == 0.0);

  JumpSplit lc = jump_split(fixtures::plateau_N(1.0), kH);
  CHECK(lc.entries[0].delta_minus == 0.0);
  CHECK(lc.entries[0].delta_plus == 1.0);

  FlatLevels outside;
  outside.levels.push_back({5.0, 0.0, 1.0});
  CHECK_THROWS_AS(jump_split(fixtures::plateau_N(1.5), outside), ParameterError);
}

TEST_CASE("outward jumps at the integrator's endpoints do not count") {
  // N jumps at the level where M starts flat; the part of the jump below the
  // restricted range must not enter the split.  This shape once exposed a
  // real disagreement between the two sides.
  MonotoneFn M({0.0, 1.0}, {{0.0, 0.5, 0.5, 0.5}, {1.0, 0.5, 0.5, 0.5}},
               {{SegmentKind::constant, 0.0, 0.5}});
  // N on the exact range [0.5, 0.5] is degenerate, so widen M a little
  MonotoneFn M2({0.0, 2.0},
                {{0.0, 0.5, 0.5, 0.5}, {1.0, 0.5, 0.5, 0.5}, {2.0, 1.5, 1.5, 1.5}},
                {{SegmentKind::constant, 0.0, 0.5}, {SegmentKind::linear, 1.0, 0.5}});
  MonotoneFn N({0.0, 2.0},
               {{0.0, 0.0, 0.0, 0.0}, {0.5, 0.25, 0.75, 0.75}, {2.0, 2.25, 2.25, 2.25}},
               {{SegmentKind::linear, 0.5, 0.0}, {SegmentKind::linear, 1.0, 0.75}});
  MonotoneFn Nr = restrict_to(N, M2.min_value(), M2.max_value());
  JumpSplit js = jump_split(Nr, flat_levels(M2));
  REQUIRE(js.entries.size() == 1);
  CHECK(js.entries[0].y == 0.5);
  CHECK(js.entries[0].delta_minus == 0.0);  // collapsed by the endpoint convention
  CHECK(js.entries[0].delta_plus == 0.0);
  PiecewiseFn f = PiecewiseFn::coordinate({0.0, 2.0});
  VerificationReport rep = verify_identity("eq5", f, M2, N);
  CHECK(rep.pass);
}

TEST_CASE("decomposition of the plateau integrator") {
  MonotoneFn N = fixtures::plateau_N(1.5);
  Decomposition dec = decompose(N, kH);
  // n1 collapses to the identity: two knots, one linear piece
  CHECK(dec.n1.breakpoints().size() == 2);
  CHECK(dec.n1.is_continuous());
  CHECK(dec.n1.eval(1.0) == 1.0);
  CHECK(dec.n2.is_right_continuous());
  CHECK(dec.n3.is_left_continuous());
  CHECK(dec.n2.eval(1.0) == 0.5);
  CHECK(dec.n2.eval(1.0, Side::left) == 0.0);
  CHECK(dec.n3.eval(1.0) == 0.0);
  CHECK(dec.n3.eval(1.0, Side::right) == 0.5);
  // exact re-addition at the original breakpoints, field by field
  for (const Breakpoint& b : N.breakpoints()) {
    for (Side s : {Side::left, Side::value, Side::right}) {
      CHECK(dec.n1.eval(b.x, s) + dec.n2.eval(b.x, s) + dec.n3.eval(b.x, s) == N.eval(b.x, s));
    }
  }
}

TEST_CASE("substitution identity on the plateau, all three jump placements") {
  PiecewiseFn f = fixtures::coordinate_f();
  MonotoneFn Nmid = fixtures::plateau_N(1.5);

  double lhs = cov_lhs(f, kM, Nmid);
  CHECK(lhs == 4.5);
  for (InverseSide side : {InverseSide::left, InverseSide::right}) {
    CovTerms t = cov_rhs(f, kM, Nmid, side);
    CHECK(t.term_n1 == 3.0);
    CHECK(t.term_minus == 0.5);
    CHECK(t.term_plus == 1.0);
    CHECK(t.total() == lhs);
  }

  CovTerms rc = cov_rhs(f, kM, fixtures::plateau_N(2.0), InverseSide::left);
  CHECK(rc.term_minus == 1.0);
  CHECK(rc.term_plus == 0.0);
  CHECK(rc.total() == 4.0);
  CHECK(cov_lhs(f, kM, fixtures::plateau_N(2.0)) == 4.0);

  CovTerms lc = cov_rhs(f, kM, fixtures::plateau_N(1.0), InverseSide::left);
  CHECK(lc.term_minus == 0.0);
  CHECK(lc.term_plus == 2.0);
  CHECK(lc.total() == 5.0);
  CHECK(cov_lhs(f, kM, fixtures::plateau_N(1.0)) == 5.0);
}

TEST_CASE("verify eq5 and eq6 agree when the integrand factors through M") {
  PiecewiseFn g = fixtures::coordinate_f();
  MonotoneFn N = fixtures::plateau_N(1.5);
  VerificationReport r5 = verify_identity("eq5", compose_with_monotone(g, kM), kM, N);
  VerificationReport r6 = verify_identity("eq6", g, kM, N);
  CHECK(r5.pass);
  CHECK(r6.pass);
  CHECK(r5.lhs == r6.lhs);
  CHECK(r5.rhs_total == r6.rhs_total);
}

TEST_CASE("eq1 needs continuity at flat levels and is selector-independent") {
  PiecewiseFn f = fixtures::coordinate_f();
  CHECK_THROWS_AS(verify_identity("eq1", f, kM, fixtures::plateau_N(1.5)), PreconditionError);
  try {
    verify_identity("eq1", f, kM, fixtures::plateau_N(1.5));
  } catch (const PreconditionError& e) {
    CHECK(e.level == 1.0);
  }
  // continuous N over the plateau
  MonotoneFn N = MonotoneFn::identity({0.0, 2.0});
  double first = 0.0;
  for (double theta : {0.0, 0.25, 0.5, 1.0}) {
    VerifyOptions o;
    o.theta = theta;
    VerificationReport rep = verify_identity("eq1", f, kM, N, o);
    CHECK(rep.pass);
    if (theta == 0.0)
      first = rep.rhs_total;
    else
      CHECK(rep.rhs_total == first);
  }
  // no flats at all: the jump instance against the identity integrator
  VerificationReport rep = verify_identity("eq1", PiecewiseFn::coordinate({0.0, 2.5}),
                                           fixtures::jumpy_M(), MonotoneFn::identity({0.0, 2.5}));
  CHECK(rep.pass);
  CHECK(rep.lhs == 2.5);
  CHECK(rep.rhs_total == 2.5);
}

TEST_CASE("eq2 needs a continuous inner function") {
  PiecewiseFn g = fixtures::coordinate_f();
  VerificationReport rep = verify_identity("eq2", g, kM, fixtures::plateau_N(1.5));
  CHECK(rep.pass);
  CHECK_THROWS_AS(
      verify_identity("eq2", PiecewiseFn::coordinate({0.0, 2.5}), fixtures::jumpy_M(),
                      MonotoneFn::identity({0.0, 2.5})),
      PreconditionError);
}

TEST_CASE("eq3 and eq4 pushforward identities") {
  PiecewiseFn f = fixtures::coordinate_f();
  // right-continuous placement satisfies eq3 and violates eq4
  VerificationReport r3 = verify_identity("eq3", f, kM, fixtures::plateau_N(2.0));
  CHECK(r3.pass);
  CHECK(r3.lhs == 4.0);
  CHECK_THROWS_AS(verify_identity("eq4", f, kM, fixtures::plateau_N(2.0)), PreconditionError);
  // left-continuous placement mirrors
  VerificationReport r4 = verify_identity("eq4", f, kM, fixtures::plateau_N(1.0));
  CHECK(r4.pass);
  CHECK(r4.lhs == 5.0);

  // forcing the failed precondition reports the witness from the flat run
  VerifyOptions o;
  o.force = true;
  VerificationReport forced = verify_identity("eq3", f, kM, fixtures::plateau_N(1.5), o);
  CHECK(forced.forced);
  CHECK_FALSE(forced.pass);
  CHECK(forced.residual == 0.5);
  REQUIRE(forced.witnesses.size() == 1);
  CHECK(forced.witnesses[0].x == 1.5);
  CHECK(forced.witnesses[0].pushforward == 2.0);
  CHECK(forced.witnesses[0].composed == 1.5);
  CHECK(forced.witnesses[0].gap == 0.5);
}

TEST_CASE("unknown tags and degenerate inner functions") {
  PiecewiseFn f = fixtures::coordinate_f();
  CHECK_THROWS_AS(verify_identity("eq9", f, kM, fixtures::plateau_N(1.5)), ParameterError);
  CHECK_THROWS_AS(verify_identity("nonsense", f, kM, fixtures::plateau_N(1.5)),
                  ParameterError);
  // constant M: both sides empty, reported as a trivial pass
  MonotoneFn C = MonotoneFn::constant({0.0, 3.0}, 1.0);
  VerificationReport rep = verify_identity("eq5", f, C, fixtures::plateau_N(1.5));
  CHECK(rep.pass);
  CHECK(rep.lhs == 0.0);
  CHECK(rep.rhs_total == 0.0);
}

TEST_CASE("inequalities on the plateau sandwich the substitution value") {
  PiecewiseFn g = fixtures::coordinate_f();
  auto reports = check_inequalities(g, kM, fixtures::plateau_N(1.5), 1e-12);
  REQUIRE(reports.size() == 3);  // M continuous, so both one-sided variants apply
  CHECK(reports[0].tag == "ineq7");
  CHECK(reports[0].pass);
  CHECK(reports[0].lhs == 4.5);
  CHECK(reports[0].rhs_terms[0].value == 4.0);
  CHECK(reports[0].rhs_terms[1].value == 5.0);
  CHECK(reports[1].tag == "ineq8");
  CHECK(reports[1].pass);
  CHECK(reports[2].tag == "ineq9");
  CHECK(reports[2].pass);
}

TEST_CASE("one-sided inequalities pick the matching continuity side") {
  // left-continuous inner function with a genuine jump: comparison of the
  // composed integral 4.0 against the range integral 4.5
  MonotoneFn M = fixtures::leftcont_M();
  MonotoneFn N = MonotoneFn::identity({0.0, 3.0});
  PiecewiseFn g = PiecewiseFn::coordinate({0.0, 3.0});
  auto reports = check_inequalities(g, M, N, 1e-12);
  REQUIRE(reports.size() == 2);  // ineq9 is absent: M is not right-continuous
  CHECK(reports[0].tag == "ineq7");
  CHECK(reports[0].pass);
  CHECK(reports[1].tag == "ineq8");
  CHECK(reports[1].pass);
  CHECK(reports[1].lhs == 4.0);
  CHECK(reports[1].rhs_terms[0].value == 4.5);

  // a decreasing integrand flips the directions
  auto flipped = check_inequalities(negate(g), M, N, 1e-12, true);
  for (const auto& rep : flipped) CHECK(rep.pass);

  // declaring the wrong direction is rejected
  CHECK_THROWS_AS(check_inequalities(negate(g), M, N, 1e-12, false), ValidationError);
}

TEST_CASE("random instances satisfy eq5 with both inverse choices") {
  InstanceGenerator gen(501);
  for (int k = 0; k < 100; ++k) {
    MonotoneFn M = gen.monotone();
    MonotoneFn N = gen.outer_for(M, FlatContinuity::free);
    ClosedInterval hull{std::min(M.domain().lo, M.min_value()),
                        std::max(M.domain().hi, M.max_value())};
    PiecewiseFn f = gen.integrand(hull);
    for (InverseSide side : {InverseSide::left, InverseSide::right}) {
      VerifyOptions o;
      o.side = side;
      VerificationReport rep = verify_identity("eq5", f, M, N, o);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("decomposition re-adds exactly on random instances") {
  InstanceGenerator gen(502);
  for (int k = 0; k < 60; ++k) {
    MonotoneFn M = gen.monotone();
    MonotoneFn N = gen.outer_for(M, FlatContinuity::free);
    MonotoneFn Nr = restrict_to(N, M.min_value(), M.max_value());
    FlatLevels H = flat_levels(M);
    Decomposition dec = decompose(Nr, H);
    CHECK(dec.n2.is_right_continuous());
    CHECK(dec.n3.is_left_continuous());
    for (const Breakpoint& b : Nr.breakpoints()) {
      for (Side s : {Side::left, Side::value, Side::right}) {
        CHECK(dec.n1.eval(b.x, s) + dec.n2.eval(b.x, s) + dec.n3.eval(b.x, s) ==
              Nr.eval(b.x, s));
      }
    }
    // n1 is continuous at every flat level
    for (const auto& lev : H.levels) {
      if (lev.y < Nr.domain().lo || lev.y > Nr.domain().hi) continue;
      CHECK(dec.n1.eval(lev.y, Side::left) == dec.n1.eval(lev.y, Side::right));
    }
  }
}
