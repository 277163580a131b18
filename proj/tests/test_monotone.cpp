#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/generator.hpp"
#include "stieltjes/monotone.hpp"

using namespace stieltjes;

TEST_CASE("construction rejects broken invariants") {
  ClosedInterval dom{0.0, 1.0};
  std::vector<Segment> seg{{SegmentKind::linear, 1.0, 0.0}};

  // value below left limit
  CHECK_THROWS_AS(MonotoneFn(dom, {{0.0, 0.5, 0.0, 0.5}, {1.0, 1.0, 1.0, 1.0}}, seg),
                  ValidationError);
  // decreasing across a gap: right limit above the next left limit
  CHECK_THROWS_AS(MonotoneFn(dom, {{0.0, 0.0, 0.0, 2.0}, {1.0, 1.0, 1.0, 1.0}},
                             {{SegmentKind::constant, 0.0, 2.0}}),
                  ValidationError);
  // left limit at lo must equal the value
  CHECK_THROWS_AS(MonotoneFn(dom, {{0.0, -0.5, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}, seg),
                  ValidationError);
  // right limit at hi must equal the value
  CHECK_THROWS_AS(MonotoneFn(dom, {{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.5}}, seg),
                  ValidationError);
  // breakpoints out of order
  CHECK_THROWS_AS(MonotoneFn(dom,
                             {{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}},
                             {{SegmentKind::linear, 1.0, 0.0}, {SegmentKind::linear, 1.0, 0.0}}),
                  ValidationError);
  // negative slope
  CHECK_THROWS_AS(MonotoneFn(dom, {{0.0, 0.0, 0.0, 0.0}, {1.0, -1.0, -1.0, -1.0}},
                             {{SegmentKind::linear, -1.0, 0.0}}),
                  ValidationError);
  // anchor inconsistent with the left knot's right limit
  CHECK_THROWS_AS(MonotoneFn(dom, {{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}},
                             {{SegmentKind::linear, 1.0, 0.25}}),
                  ValidationError);
  // linear far end misses the next left limit
  CHECK_THROWS_AS(MonotoneFn(dom, {{0.0, 0.0, 0.0, 0.0}, {1.0, 0.25, 0.25, 0.25}}, seg),
                  ValidationError);
  // segment count mismatch
  CHECK_THROWS_AS(MonotoneFn(dom, {{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}, {}),
                  ValidationError);
}

TEST_CASE("a zero-slope linear segment is reclassified as constant") {
  MonotoneFn m({0.0, 1.0}, {{0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}},
               {{SegmentKind::linear, 0.0, 0.0}});
  CHECK(m.segments()[0].kind == SegmentKind::constant);
}

TEST_CASE("one-sided evaluation on the plateau example") {
  MonotoneFn M = fixtures::plateau_M();
  CHECK(M.eval(0.5) == 0.5);
  CHECK(M.eval(1.5) == 1.0);
  CHECK(M.eval(2.5) == 1.5);
  // boundary knots use the stored triple
  CHECK(M.eval(1.0, Side::left) == 1.0);
  CHECK(M.eval(1.0, Side::right) == 1.0);
  CHECK(M.eval(0.0, Side::left) == 0.0);
  CHECK(M.eval(3.0, Side::right) == 2.0);
  CHECK_THROWS_AS(M.eval(-0.1), DomainError);
  CHECK_THROWS_AS(M.eval(3.1), DomainError);

  MonotoneFn N = fixtures::plateau_N(1.5);
  CHECK(N.eval(1.0, Side::left) == 1.0);
  CHECK(N.eval(1.0) == 1.5);
  CHECK(N.eval(1.0, Side::right) == 2.0);
  CHECK(eval_at(N, 1.0, Side::right) == 2.0);
}

TEST_CASE("continuity queries") {
  CHECK(fixtures::plateau_M().is_continuous());
  MonotoneFn N = fixtures::plateau_N(1.5);
  CHECK_FALSE(N.is_continuous());
  CHECK_FALSE(N.is_left_continuous());
  CHECK_FALSE(N.is_right_continuous());
  CHECK(fixtures::plateau_N(2.0).is_right_continuous());
  CHECK(fixtures::plateau_N(1.0).is_left_continuous());
  CHECK(fixtures::leftcont_M().is_left_continuous());
  CHECK_FALSE(fixtures::leftcont_M().is_right_continuous());
}

TEST_CASE("flat levels of the plateau and of a constant function") {
  FlatLevels H = flat_levels(fixtures::plateau_M());
  REQUIRE(H.levels.size() == 1);
  CHECK(H.levels[0].y == 1.0);
  CHECK(H.levels[0].x_left == 1.0);
  CHECK(H.levels[0].x_right == 2.0);
  CHECK(H.contains(1.0));
  CHECK_FALSE(H.contains(0.5));

  CHECK(flat_levels(fixtures::jumpy_M()).empty());

  FlatLevels C = flat_levels(MonotoneFn::constant({0.0, 2.0}, 0.75));
  REQUIRE(C.levels.size() == 1);
  CHECK(C.levels[0].y == 0.75);
  CHECK(C.levels[0].x_left == 0.0);
  CHECK(C.levels[0].x_right == 2.0);
}

TEST_CASE("composition reproduces the worked example's one-sided limits") {
  MonotoneFn L = compose(fixtures::plateau_N(1.5), fixtures::plateau_M());
  // the published sample triple at x = 2
  CHECK(L.eval(2.0, Side::left) == 1.5);
  CHECK(L.eval(2.0) == 1.5);
  CHECK(L.eval(2.0, Side::right) == 2.0);
  // where M rises into the flat level, the outer left limit applies
  CHECK(L.eval(1.0, Side::left) == 1.0);
  CHECK(L.eval(1.0) == 1.5);
  CHECK(L.eval(1.0, Side::right) == 1.5);
  CHECK(L.eval(3.0) == 3.0);
  CHECK(L.eval(0.5) == 0.5);
  CHECK(L.eval(2.5) == 2.5);
}

TEST_CASE("composition range mismatch throws") {
  MonotoneFn narrow = MonotoneFn::identity({0.0, 1.0});
  CHECK_THROWS_AS(compose(narrow, fixtures::plateau_M()), CompositionError);
}

TEST_CASE("composition equals nested evaluation on random instances") {
  InstanceGenerator gen(2024);
  GeneratorOptions pow2;
  pow2.pow2_slopes = true;
  for (int k = 0; k < 50; ++k) {
    MonotoneFn M = gen.monotone(pow2);
    MonotoneFn N = gen.outer_for(M, FlatContinuity::free, pow2);
    MonotoneFn L = compose(N, M);
    for (int i = 0; i < 100; ++i) {
      double x = gen.dyadic(M.domain().lo, M.domain().hi);
      // power-of-two slopes keep every intermediate dyadic, hence bitwise
      CHECK(L.eval(x) == N.eval(M.eval(x)));
    }
  }
  for (int k = 0; k < 50; ++k) {
    MonotoneFn M = gen.monotone();
    MonotoneFn N = gen.outer_for(M, FlatContinuity::free);
    MonotoneFn L = compose(N, M);
    for (int i = 0; i < 100; ++i) {
      double x = gen.dyadic(M.domain().lo, M.domain().hi);
      CHECK(L.eval(x) == doctest::Approx(N.eval(M.eval(x))).epsilon(1e-12));
    }
  }
}

TEST_CASE("inverses of the plateau swap the flat into a jump") {
  MonotoneFn M = fixtures::plateau_M();
  MonotoneFn X = left_inverse(M);
  MonotoneFn Xi = right_inverse(M);
  CHECK(X.domain().lo == 0.0);
  CHECK(X.domain().hi == 2.0);
  CHECK(X.eval(1.0) == 1.0);
  CHECK(X.eval(1.0, Side::right) == 2.0);
  CHECK(Xi.eval(1.0) == 2.0);
  CHECK(Xi.eval(1.0, Side::left) == 1.0);
  CHECK(X.eval(0.5) == 0.5);
  CHECK(X.eval(1.5) == 2.5);
  CHECK(Xi.eval(1.5) == 2.5);
  // jump of M becomes a flat of the inverses
  MonotoneFn J = fixtures::jumpy_M();
  MonotoneFn XJ = left_inverse(J);
  FlatLevels F = flat_levels(XJ);
  REQUIRE(F.levels.size() == 1);
  CHECK(F.levels[0].y == 1.0);
  CHECK(F.levels[0].x_left == 1.0);
  CHECK(F.levels[0].x_right == 1.5);
}

TEST_CASE("generalized inverse of a constant function is undefined") {
  CHECK_THROWS_AS(left_inverse(MonotoneFn::constant({0.0, 1.0}, 0.5)), CompositionError);
}

TEST_CASE("selector inverse interpolates and hits the extremes exactly") {
  MonotoneFn M = fixtures::plateau_M();
  MonotoneFn X = left_inverse(M);
  MonotoneFn Xi = right_inverse(M);
  MonotoneFn W0 = selector_inverse(M, 0.0);
  MonotoneFn W1 = selector_inverse(M, 1.0);
  for (std::size_t i = 0; i < X.breakpoints().size(); ++i) {
    CHECK(W0.breakpoints()[i].value == X.breakpoints()[i].value);
    CHECK(W1.breakpoints()[i].value == Xi.breakpoints()[i].value);
  }
  MonotoneFn Wh = selector_inverse(M, 0.5);
  CHECK(Wh.eval(1.0) == 1.5);
  CHECK_THROWS_AS(selector_inverse(M, -0.25), ParameterError);
  CHECK_THROWS_AS(selector_inverse(M, 1.25), ParameterError);
}

TEST_CASE("inverse characterization on random instances") {
  InstanceGenerator gen(77);
  for (int k = 0; k < 100; ++k) {
    MonotoneFn M = gen.monotone();
    double ylo = M.min_value(), yhi = M.max_value();
    for (int i = 0; i < 60; ++i) {
      double y = gen.dyadic(ylo, yhi);
      double x = gen.dyadic(M.domain().lo, M.domain().hi);
      // inf{ t : y <= M(t) } <= x exactly when y <= M(x+)
      CHECK((inf_preimage(M, y) <= x) == (y <= M.eval(x, Side::right)));
      // sup{ t : M(t) <= y } >= x exactly when y >= M(x-)
      CHECK((sup_preimage(M, y) >= x) == (y >= M.eval(x, Side::left)));
    }
  }
}

TEST_CASE("selector inverses are sandwiched between the extremes") {
  InstanceGenerator gen(78);
  for (int k = 0; k < 50; ++k) {
    MonotoneFn M = gen.monotone();
    MonotoneFn X = left_inverse(M);
    MonotoneFn Xi = right_inverse(M);
    for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      MonotoneFn W = selector_inverse(M, theta);
      for (int i = 0; i < 40; ++i) {
        double y = gen.dyadic(M.min_value(), M.max_value());
        double w = W.eval(y);
        CHECK(X.eval(y) <= w);
        CHECK(w <= Xi.eval(y));
      }
    }
  }
}

TEST_CASE("constructed inverses agree with the pointwise preimage scanners") {
  InstanceGenerator gen(79);
  GeneratorOptions pow2;
  pow2.pow2_slopes = true;
  for (int k = 0; k < 60; ++k) {
    MonotoneFn M = gen.monotone(pow2);
    MonotoneFn X = left_inverse(M);
    MonotoneFn Xi = right_inverse(M);
    for (int i = 0; i < 60; ++i) {
      double y = gen.dyadic(M.min_value(), M.max_value());
      CHECK(X.eval(y) == inf_preimage(M, y));
      CHECK(Xi.eval(y) == sup_preimage(M, y));
    }
  }
  CHECK_THROWS_AS(inf_preimage(fixtures::plateau_M(), 2.5), DomainError);
  CHECK_THROWS_AS(sup_preimage(fixtures::plateau_M(), -0.5), DomainError);
}

TEST_CASE("inverting twice returns a strictly increasing continuous function") {
  InstanceGenerator gen(80);
  GeneratorOptions opts;
  opts.jump_prob = 0.0;
  opts.flat_prob = 0.0;
  opts.pow2_slopes = true;
  for (int k = 0; k < 40; ++k) {
    MonotoneFn M = gen.monotone(opts);
    MonotoneFn back = left_inverse(left_inverse(M));
    REQUIRE(back.domain().lo == M.domain().lo);
    REQUIRE(back.domain().hi == M.domain().hi);
    for (int i = 0; i < 50; ++i) {
      double x = gen.dyadic(M.domain().lo, M.domain().hi);
      CHECK(back.eval(x) == M.eval(x));
    }
    MonotoneFn back2 = right_inverse(right_inverse(M));
    for (int i = 0; i < 50; ++i) {
      double x = gen.dyadic(M.domain().lo, M.domain().hi);
      CHECK(back2.eval(x) == M.eval(x));
    }
  }
}

TEST_CASE("inverses ignore the stored value inside a jump") {
  // Two copies of the two-sided-jump instance differing only in the stored
  // value at the jump; the generalized inverses must be identical.
  MonotoneFn a = fixtures::jumpy_M();
  MonotoneFn b({0.0, 2.0},
               {{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.4375, 1.5}, {2.0, 2.5, 2.5, 2.5}},
               {{SegmentKind::linear, 1.0, 0.0}, {SegmentKind::linear, 1.0, 1.5}});
  MonotoneFn xa = left_inverse(a), xb = left_inverse(b);
  REQUIRE(xa.breakpoints().size() == xb.breakpoints().size());
  for (std::size_t i = 0; i < xa.breakpoints().size(); ++i) {
    CHECK(xa.breakpoints()[i].x == xb.breakpoints()[i].x);
    CHECK(xa.breakpoints()[i].value == xb.breakpoints()[i].value);
  }
}

TEST_CASE("monotonicity of one-sided evaluation on sorted samples") {
  InstanceGenerator gen(81);
  for (int k = 0; k < 50; ++k) {
    MonotoneFn M = gen.monotone();
    double prev = M.eval(M.domain().lo, Side::left);
    for (int i = 0; i <= 200; ++i) {
      double x = M.domain().lo + (M.domain().hi - M.domain().lo) * i / 200.0;
      double l = M.eval(x, Side::left), v = M.eval(x), r = M.eval(x, Side::right);
      CHECK(l <= v);
      CHECK(v <= r);
      CHECK(prev <= l);
      prev = r;
    }
  }
}

TEST_CASE("constant-side queries") {
  MonotoneFn M = fixtures::plateau_M();
  CHECK(constant_on_right(M, 1.0));
  CHECK(constant_on_right(M, 1.5));
  CHECK_FALSE(constant_on_right(M, 2.0));
  CHECK_FALSE(constant_on_right(M, 3.0));
  CHECK(constant_on_left(M, 2.0));
  CHECK(constant_on_left(M, 1.5));
  CHECK_FALSE(constant_on_left(M, 1.0));
  CHECK_FALSE(constant_on_left(M, 0.0));
  CHECK_THROWS_AS(constant_on_right(M, 3.5), DomainError);
}

TEST_CASE("restriction keeps interior values and adopts endpoint conventions") {
  MonotoneFn N = fixtures::plateau_N(1.5);
  MonotoneFn R = restrict_to(N, 0.5, 1.5);
  CHECK(R.domain().lo == 0.5);
  CHECK(R.domain().hi == 1.5);
  CHECK(R.eval(0.5, Side::left) == R.eval(0.5));
  CHECK(R.eval(1.5, Side::right) == R.eval(1.5));
  CHECK(R.eval(1.0, Side::left) == 1.0);
  CHECK(R.eval(1.0) == 1.5);
  CHECK(R.eval(1.0, Side::right) == 2.0);
  CHECK(R.eval(1.25) == 2.25);
  CHECK_THROWS_AS(restrict_to(N, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(restrict_to(N, -1.0, 1.0), ParameterError);
}

TEST_CASE("restriction collapses an outward jump at the new endpoints") {
  // Restricting so that a two-sided jump lands on the boundary keeps only
  // the inward half.
  MonotoneFn J = fixtures::jumpy_M();
  MonotoneFn R = restrict_to(J, 1.0, 2.0);
  CHECK(R.eval(1.0, Side::left) == R.eval(1.0));
  CHECK(R.eval(1.0) == 1.25);
  CHECK(R.eval(1.0, Side::right) == 1.5);
  MonotoneFn L = restrict_to(J, 0.0, 1.0);
  CHECK(L.eval(1.0, Side::right) == L.eval(1.0));
  CHECK(L.eval(1.0) == 1.25);
  CHECK(L.eval(1.0, Side::left) == 1.0);
}

TEST_CASE("factories") {
  MonotoneFn id = MonotoneFn::identity({-1.0, 2.0});
  CHECK(id.eval(0.5) == 0.5);
  CHECK(id.is_continuous());
  MonotoneFn lin = MonotoneFn::linear({0.0, 2.0}, 0.5, 1.0);
  CHECK(lin.eval(2.0) == 2.0);
  MonotoneFn c = MonotoneFn::constant({0.0, 1.0}, 3.0);
  CHECK(c.eval(0.7) == 3.0);
  CHECK(c.min_value() == c.max_value());
}
