#include "stieltjes/monotone.hpp"

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

// Tolerance for the far-end consistency of a linear piece against the next
// breakpoint's left limit.  This is the only inexact comparison in the
// representation; it absorbs the rounding of anchor + slope * dx.
double consistency_tol(double a, double b) {
  return 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

bool all_finite(const Breakpoint& b) {
  return std::isfinite(b.x) && std::isfinite(b.left) && std::isfinite(b.value) &&
         std::isfinite(b.right);
}

// Internal construction helper: knots carry the one-sided data, gaps carry
// the piece shape between adjacent knots.  Anchors are derived from the left
// knot's right limit so the assembled function is consistent by construction.
struct Knot {
  double x, l, v, r;
};

struct Gap {
  SegmentKind kind;
  double slope;
};

Gap make_gap(double slope) {
  if (slope == 0.0) return {SegmentKind::constant, 0.0};
  return {SegmentKind::linear, slope};
}

// Clamps knot fields into the monotone corridor left by the previous knot.
// A no-op for exactly-representable inputs; repairs one-ulp rounding spill
// from evaluating near-coincident levels during composition.
void clamp_chain(std::vector<Knot>& knots) {
  double floor = knots.front().l;
  for (Knot& k : knots) {
    k.l = std::max(k.l, floor);
    k.v = std::max(k.v, k.l);
    k.r = std::max(k.r, k.v);
    floor = k.r;
  }
}

MonotoneFn assemble(ClosedInterval dom, std::vector<Knot> knots, std::vector<Gap> gaps,
                    bool clamp = false) {
  if (clamp) clamp_chain(knots);
  knots.front().l = knots.front().v;
  knots.back().r = knots.back().v;

  // Drop interior knots that are plain continuation points of one piece.
  std::vector<Knot> ks;
  std::vector<Gap> gs;
  ks.push_back(knots.front());
  for (size_t i = 1; i < knots.size(); ++i) {
    const Knot& k = knots[i];
    const Gap& g = gaps[i - 1];
    if (i + 1 < knots.size() && k.l == k.v && k.v == k.r) {
      const Gap& gn = gaps[i];
      bool mergeable = false;
      if (g.kind == gn.kind && g.slope == gn.slope) {
        const Knot& prev = ks.back();
        if (g.kind == SegmentKind::constant) {
          mergeable = prev.r == k.v;
        } else {
          mergeable = prev.r + g.slope * (k.x - prev.x) == k.v;
        }
      }
      if (mergeable) continue;  // absorb knot into the running piece
    }
    gs.push_back(g);
    ks.push_back(k);
  }

  std::vector<Breakpoint> bps;
  bps.reserve(ks.size());
  for (const Knot& k : ks) bps.push_back({k.x, k.l, k.v, k.r});
  std::vector<Segment> segs;
  segs.reserve(gs.size());
  for (size_t i = 0; i < gs.size(); ++i)
    segs.push_back({gs[i].kind, gs[i].slope, bps[i].right});
  return MonotoneFn(dom, std::move(bps), std::move(segs));
}

}  // namespace

MonotoneFn assemble_monotone(ClosedInterval domain, std::vector<Breakpoint> knots,
                             std::vector<PieceShape> gaps) {
  if (knots.size() < 2 || gaps.size() != knots.size() - 1)
    throw ValidationError("assembly requires at least two knots and one gap per knot pair");
  std::vector<Knot> ks;
  ks.reserve(knots.size());
  for (const Breakpoint& b : knots) ks.push_back({b.x, b.left, b.value, b.right});
  std::vector<Gap> gs;
  gs.reserve(gaps.size());
  for (const PieceShape& g : gaps) gs.push_back({g.kind, g.slope});
  return assemble(domain, std::move(ks), std::move(gs));
}

MonotoneFn::MonotoneFn(ClosedInterval domain, std::vector<Breakpoint> breakpoints,
                       std::vector<Segment> segments)
    : domain_(domain), breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
  // A linear piece with zero slope is a constant piece; canonicalize so flat
  // detection can rely on the kind tag alone.
  for (Segment& s : segments_)
    if (s.kind == SegmentKind::linear && s.slope == 0.0) s.kind = SegmentKind::constant;
  validate();
}

void MonotoneFn::validate() const {
  if (!(std::isfinite(domain_.lo) && std::isfinite(domain_.hi)))
    throw ValidationError("domain endpoints must be finite");
  if (!(domain_.lo < domain_.hi))
    throw ValidationError("domain [" + fmt(domain_.lo) + ", " + fmt(domain_.hi) +
                          "] is degenerate: lo must be strictly less than hi");
  if (breakpoints_.size() < 2) throw ValidationError("at least two breakpoints required");
  if (segments_.size() != breakpoints_.size() - 1)
    throw ValidationError("segment count must be breakpoint count minus one");

  const Breakpoint& first = breakpoints_.front();
  const Breakpoint& last = breakpoints_.back();
  if (first.x != domain_.lo) throw ValidationError("first breakpoint must sit at domain lo");
  if (last.x != domain_.hi) throw ValidationError("last breakpoint must sit at domain hi");
  if (first.left != first.value)
    throw ValidationError("left limit at domain lo must equal the value there");
  if (last.right != last.value)
    throw ValidationError("right limit at domain hi must equal the value there");

  for (size_t i = 0; i < breakpoints_.size(); ++i) {
    const Breakpoint& b = breakpoints_[i];
    if (!all_finite(b))
      throw ValidationError("breakpoints[" + std::to_string(i) + "] has a non-finite field");
    if (!(b.left <= b.value && b.value <= b.right))
      throw ValidationError("breakpoints[" + std::to_string(i) +
                            "] violates left <= value <= right");
    if (i > 0 && !(breakpoints_[i - 1].x < b.x))
      throw ValidationError("breakpoint positions must be strictly increasing at index " +
                            std::to_string(i));
  }

  for (size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    const Breakpoint& a = breakpoints_[i];
    const Breakpoint& b = breakpoints_[i + 1];
    if (!(std::isfinite(s.slope) && std::isfinite(s.anchor)))
      throw ValidationError("segments[" + std::to_string(i) + "] has a non-finite field");
    if (s.slope < 0.0)
      throw ValidationError("segments[" + std::to_string(i) + "] has negative slope");
    if (s.kind == SegmentKind::constant && s.slope != 0.0)
      throw ValidationError("segments[" + std::to_string(i) + "] is constant with nonzero slope");
    if (s.anchor != a.right)
      throw ValidationError("segments[" + std::to_string(i) +
                            "] anchor must equal the left breakpoint's right limit");
    if (!(a.right <= b.left))
      throw ValidationError("monotonicity fails between breakpoints " + std::to_string(i) +
                            " and " + std::to_string(i + 1));
    double far = s.anchor + s.slope * (b.x - a.x);
    if (s.kind == SegmentKind::constant) {
      if (b.left != s.anchor)
        throw ValidationError("constant segments[" + std::to_string(i) +
                              "] does not meet the next breakpoint's left limit");
    } else if (std::fabs(far - b.left) > consistency_tol(far, b.left)) {
      throw ValidationError("segments[" + std::to_string(i) + "] reaches " + fmt(far) +
                            " but the next breakpoint's left limit is " + fmt(b.left));
    }
  }
}

MonotoneFn MonotoneFn::linear(ClosedInterval domain, double slope, double value_at_lo) {
  double top = value_at_lo + slope * (domain.hi - domain.lo);
  std::vector<Breakpoint> bps = {{domain.lo, value_at_lo, value_at_lo, value_at_lo},
                                 {domain.hi, top, top, top}};
  SegmentKind k = slope == 0.0 ? SegmentKind::constant : SegmentKind::linear;
  return MonotoneFn(domain, std::move(bps), {{k, slope, value_at_lo}});
}

MonotoneFn MonotoneFn::constant(ClosedInterval domain, double level) {
  return linear(domain, 0.0, level);
}

MonotoneFn MonotoneFn::identity(ClosedInterval domain) {
  return linear(domain, 1.0, domain.lo);
}

double MonotoneFn::eval(double x, Side side) const {
  if (!domain_.contains(x))
    throw DomainError("evaluation point " + fmt(x) + " outside domain [" + fmt(domain_.lo) +
                      ", " + fmt(domain_.hi) + "]");
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x,
                             [](const Breakpoint& b, double v) { return b.x < v; });
  if (it != breakpoints_.end() && it->x == x) {
    switch (side) {
      case Side::left: return it->left;
      case Side::value: return it->value;
      case Side::right: return it->right;
    }
  }
  size_t i = static_cast<size_t>(it - breakpoints_.begin()) - 1;
  const Segment& s = segments_[i];
  return s.anchor + s.slope * (x - breakpoints_[i].x);
}

bool MonotoneFn::is_continuous() const {
  for (const Breakpoint& b : breakpoints_)
    if (b.left != b.value || b.value != b.right) return false;
  return true;
}

bool MonotoneFn::is_left_continuous() const {
  for (const Breakpoint& b : breakpoints_)
    if (b.left != b.value) return false;
  return true;
}

bool MonotoneFn::is_right_continuous() const {
  for (const Breakpoint& b : breakpoints_)
    if (b.value != b.right) return false;
  return true;
}

bool FlatLevels::contains(double y) const {
  for (const FlatLevel& f : levels)
    if (f.y == y) return true;
  return false;
}

FlatLevels flat_levels(const MonotoneFn& M) {
  // A maximal constancy interval is a maximal run of constant segments at one
  // level; intervening breakpoints are forced continuous there by the
  // representation invariants, so runs are detected on segments alone.
  FlatLevels out;
  const auto& seg = M.segments();
  const auto& bp = M.breakpoints();
  size_t i = 0;
  while (i < seg.size()) {
    if (seg[i].kind != SegmentKind::constant) {
      ++i;
      continue;
    }
    double level = seg[i].anchor;
    size_t k = i + 1;
    while (k < seg.size() && seg[k].kind == SegmentKind::constant && seg[k].anchor == level) ++k;
    out.levels.push_back({level, bp[i].x, bp[k].x});
    i = k;
  }
  return out;
}

MonotoneFn compose(const MonotoneFn& N, const MonotoneFn& M) {
  if (!(N.domain().lo <= M.min_value() && M.max_value() <= N.domain().hi))
    throw CompositionError("value range [" + fmt(M.min_value()) + ", " + fmt(M.max_value()) +
                           "] of the inner function is not contained in the outer domain [" +
                           fmt(N.domain().lo) + ", " + fmt(N.domain().hi) + "]");

  const auto& mb = M.breakpoints();
  const auto& ms = M.segments();
  const auto& nb = N.breakpoints();
  const auto& ns = N.segments();

  std::vector<Knot> knots;
  std::vector<Gap> gaps;

  auto knot_for_bp = [&](size_t i) {
    const Breakpoint& b = mb[i];
    double vv = N.eval(b.value, Side::value);
    double lv, rv;
    if (i == 0) {
      lv = vv;
    } else if (ms[i - 1].kind == SegmentKind::constant) {
      lv = N.eval(b.left, Side::value);  // constant approach: the value at the limit level
    } else {
      lv = N.eval(b.left, Side::left);  // strict increase: the outer left limit
    }
    if (i + 1 == mb.size()) {
      rv = vv;
    } else if (ms[i].kind == SegmentKind::constant) {
      rv = N.eval(b.right, Side::value);
    } else {
      rv = N.eval(b.right, Side::right);
    }
    return Knot{b.x, lv, vv, rv};
  };

  auto add = [&](Gap g, Knot k) {
    // Crossings are solved in closed form; under extreme scale separation a
    // solved position can collide with its neighbor, in which case the knot
    // merges instead of breaking the strict breakpoint ordering.
    if (k.x <= knots.back().x) {
      Knot& last = knots.back();
      last.r = k.r;
      last.v = std::min(std::max(last.v, last.l), last.r);
      return;
    }
    gaps.push_back(g);
    knots.push_back(k);
  };

  knots.push_back(knot_for_bp(0));
  for (size_t i = 0; i + 1 < mb.size(); ++i) {
    const Segment& sm = ms[i];
    if (sm.kind == SegmentKind::constant) {
      add({SegmentKind::constant, 0.0}, knot_for_bp(i + 1));
      continue;
    }
    double A = mb[i].right;
    double B = mb[i + 1].left;
    // Outer breakpoints crossed strictly inside the level span (A, B).
    size_t jlo = std::upper_bound(nb.begin(), nb.end(), A,
                                  [](double v, const Breakpoint& b) { return v < b.x; }) -
                 nb.begin();
    size_t jhi = std::lower_bound(nb.begin(), nb.end(), B,
                                  [](const Breakpoint& b, double v) { return b.x < v; }) -
                 nb.begin();
    for (size_t j = jlo; j < jhi; ++j) {
      double z = nb[j].x;
      double xs = mb[i].x + (z - A) / sm.slope;
      if (xs > mb[i + 1].x) xs = mb[i + 1].x;
      double piece = ns[j - 1].kind == SegmentKind::constant ? 0.0 : sm.slope * ns[j - 1].slope;
      add(make_gap(piece), Knot{xs, nb[j].left, nb[j].value, nb[j].right});
    }
    // Piece closing at the next inner breakpoint.  With a degenerate level
    // span (A == B) the bounds can invert, so take whichever is further and
    // keep the index inside the outer segment array.
    size_t jclose = std::min(std::max(jlo, jhi), nb.size() - 1);
    double piece = ns[jclose - 1].kind == SegmentKind::constant ? 0.0
                                                                : sm.slope * ns[jclose - 1].slope;
    add(make_gap(piece), knot_for_bp(i + 1));
  }

  return assemble(M.domain(), std::move(knots), std::move(gaps), /*clamp=*/true);
}

namespace {

// Shared structural sweep for the generalized inverses.  Knot levels are the
// one-sided limit values of M; every gap between adjacent levels is covered
// by exactly one structure of M: a jump (the inverse is constant there) or a
// rising linear segment (the inverse rises with reciprocal slope).  All knot
// fields of the inverse are exact breakpoint positions of M.
struct InverseStructure {
  std::vector<double> levels;
  struct GapSource {
    bool is_jump;
    double pos;   // jump position when is_jump
    size_t seg;   // M segment index otherwise
  };
  std::vector<GapSource> gaps;
  std::vector<double> below;  // limit position from below per level (levels[0]: unset)
  std::vector<double> above;  // limit position from above per level (levels.back(): unset)
};

InverseStructure inverse_structure(const MonotoneFn& M) {
  const auto& bp = M.breakpoints();
  const auto& sg = M.segments();
  double ylo = M.min_value();
  double yhi = M.max_value();
  if (!(ylo < yhi))
    throw CompositionError(
        "generalized inverse undefined: the function is constant, so its value range is a "
        "single point and cannot serve as a domain");

  InverseStructure s;
  for (const Breakpoint& b : bp) {
    s.levels.push_back(b.left);
    s.levels.push_back(b.right);
  }
  std::sort(s.levels.begin(), s.levels.end());
  s.levels.erase(std::unique(s.levels.begin(), s.levels.end()), s.levels.end());

  for (size_t k = 0; k + 1 < s.levels.size(); ++k) {
    double u = s.levels[k];
    double v = s.levels[k + 1];
    bool found = false;
    for (size_t i = 0; i < bp.size() && !found; ++i) {
      if (bp[i].left < bp[i].right && bp[i].left <= u && v <= bp[i].right) {
        s.gaps.push_back({true, bp[i].x, 0});
        found = true;
      }
      if (!found && i + 1 < bp.size() && sg[i].kind == SegmentKind::linear &&
          bp[i].right <= u && v <= bp[i + 1].left) {
        s.gaps.push_back({false, 0.0, i});
        found = true;
      }
    }
    if (!found)
      throw ValidationError("internal: level gap (" + fmt(u) + ", " + fmt(v) +
                            ") not covered by any structure of the function");
  }

  size_t n = s.levels.size();
  s.below.assign(n, 0.0);
  s.above.assign(n, 0.0);
  for (size_t k = 0; k + 1 < n; ++k) {
    const auto& g = s.gaps[k];
    s.above[k] = g.is_jump ? g.pos : bp[g.seg].x;
    s.below[k + 1] = g.is_jump ? g.pos : bp[g.seg + 1].x;
  }
  return s;
}

enum class InverseKind { left, right, selector };

MonotoneFn build_inverse(const MonotoneFn& M, InverseKind kind, double theta) {
  InverseStructure s = inverse_structure(M);
  const auto& sg = M.segments();
  double lo = M.domain().lo;
  double hi = M.domain().hi;
  size_t n = s.levels.size();

  auto pick = [&](double xval, double xival) {
    switch (kind) {
      case InverseKind::left: return xval;
      case InverseKind::right: return xival;
      case InverseKind::selector: {
        double w = xval + theta * (xival - xval);
        return std::min(std::max(w, xval), xival);
      }
    }
    return xval;
  };

  std::vector<Knot> knots(n);
  for (size_t k = 0; k < n; ++k) {
    double L = k == 0 ? lo : s.below[k];
    double R = k + 1 == n ? hi : s.above[k];
    // Values of the extreme inverses at a knot level: X takes the limit from
    // below, Xi the limit from above; at the domain endpoints the inf and sup
    // of the level set are lo and hi themselves.
    double xval = k + 1 == n ? s.below[k] : L;
    double xival = k == 0 ? s.above[k] : R;
    if (k == 0) xval = lo;
    if (k + 1 == n) xival = hi;
    double v = pick(xval, xival);
    knots[k] = {s.levels[k], k == 0 ? v : L, v, k + 1 == n ? v : R};
  }

  std::vector<Gap> gaps(n - 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    if (s.gaps[k].is_jump) {
      gaps[k] = {SegmentKind::constant, 0.0};
    } else {
      gaps[k] = {SegmentKind::linear, 1.0 / sg[s.gaps[k].seg].slope};
    }
  }

  return assemble({s.levels.front(), s.levels.back()}, std::move(knots), std::move(gaps));
}

}  // namespace

MonotoneFn left_inverse(const MonotoneFn& M) {
  return build_inverse(M, InverseKind::left, 0.0);
}

MonotoneFn right_inverse(const MonotoneFn& M) {
  return build_inverse(M, InverseKind::right, 1.0);
}

MonotoneFn selector_inverse(const MonotoneFn& M, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ParameterError("selector parameter " + fmt(theta) + " outside [0, 1]");
  if (theta == 0.0) return left_inverse(M);
  if (theta == 1.0) return right_inverse(M);
  return build_inverse(M, InverseKind::selector, theta);
}

double inf_preimage(const MonotoneFn& M, double y) {
  const auto& bp = M.breakpoints();
  const auto& sg = M.segments();
  if (!(y >= M.min_value() && y <= M.max_value()))
    throw DomainError("level " + fmt(y) + " outside the value range of the function");
  if (y <= bp[0].right) return bp[0].x;
  for (size_t i = 1; i < bp.size(); ++i) {
    if (y <= bp[i].left) {
      const Segment& s = sg[i - 1];
      if (y == bp[i].left || s.slope == 0.0) return bp[i].x;
      return bp[i - 1].x + (y - s.anchor) / s.slope;
    }
    if (y <= bp[i].right) return bp[i].x;
  }
  return bp.back().x;
}

double sup_preimage(const MonotoneFn& M, double y) {
  const auto& bp = M.breakpoints();
  const auto& sg = M.segments();
  if (!(y >= M.min_value() && y <= M.max_value()))
    throw DomainError("level " + fmt(y) + " outside the value range of the function");
  size_t n = bp.size();
  if (y >= bp[n - 1].left) return bp[n - 1].x;
  for (size_t i = n - 1; i-- > 0;) {
    if (y >= bp[i + 1].left) return bp[i + 1].x;
    if (y > bp[i].right) {
      const Segment& s = sg[i];
      return bp[i].x + (y - s.anchor) / s.slope;
    }
    if (y >= bp[i].right) return bp[i].x;
  }
  return bp[0].x;
}

namespace {

// Locates x inside the breakpoint grid: returns the segment index on the
// requested side, or the breakpoint index when x sits exactly on one.
size_t bp_index_or_npos(const MonotoneFn& M, double x) {
  const auto& bp = M.breakpoints();
  auto it = std::lower_bound(bp.begin(), bp.end(), x,
                             [](const Breakpoint& b, double v) { return b.x < v; });
  if (it != bp.end() && it->x == x) return static_cast<size_t>(it - bp.begin());
  return static_cast<size_t>(-1);
}

}  // namespace

bool constant_on_right(const MonotoneFn& M, double x) {
  if (!M.domain().contains(x)) throw DomainError("point " + fmt(x) + " outside domain");
  if (x == M.domain().hi) return false;
  size_t bi = bp_index_or_npos(M, x);
  const auto& sg = M.segments();
  if (bi != static_cast<size_t>(-1)) return sg[bi].kind == SegmentKind::constant;
  const auto& bp = M.breakpoints();
  auto it = std::upper_bound(bp.begin(), bp.end(), x,
                             [](double v, const Breakpoint& b) { return v < b.x; });
  size_t i = static_cast<size_t>(it - bp.begin()) - 1;
  return sg[i].kind == SegmentKind::constant;
}

bool constant_on_left(const MonotoneFn& M, double x) {
  if (!M.domain().contains(x)) throw DomainError("point " + fmt(x) + " outside domain");
  if (x == M.domain().lo) return false;
  size_t bi = bp_index_or_npos(M, x);
  const auto& sg = M.segments();
  if (bi != static_cast<size_t>(-1)) return sg[bi - 1].kind == SegmentKind::constant;
  const auto& bp = M.breakpoints();
  auto it = std::upper_bound(bp.begin(), bp.end(), x,
                             [](double v, const Breakpoint& b) { return v < b.x; });
  size_t i = static_cast<size_t>(it - bp.begin()) - 1;
  return sg[i].kind == SegmentKind::constant;
}

MonotoneFn restrict_to(const MonotoneFn& M, double lo, double hi) {
  if (!(lo < hi))
    throw ParameterError("restriction [" + fmt(lo) + ", " + fmt(hi) + "] is degenerate");
  if (!M.domain().contains(lo) || !M.domain().contains(hi))
    throw ParameterError("restriction [" + fmt(lo) + ", " + fmt(hi) +
                         "] is not a subinterval of the domain");

  const auto& bp = M.breakpoints();
  const auto& sg = M.segments();

  std::vector<Knot> knots;
  std::vector<Gap> gaps;

  double v0 = M.eval(lo, Side::value);
  knots.push_back({lo, v0, v0, M.eval(lo, Side::right)});

  auto segment_left_of = [&](double x) {
    auto it = std::upper_bound(bp.begin(), bp.end(), x,
                               [](double v, const Breakpoint& b) { return v < b.x; });
    return static_cast<size_t>(it - bp.begin()) - 1;
  };

  for (size_t i = 0; i < bp.size(); ++i) {
    if (!(bp[i].x > lo && bp[i].x < hi)) continue;
    size_t si = i - 1;  // segment feeding this breakpoint from the left
    Gap g = sg[si].kind == SegmentKind::constant ? Gap{SegmentKind::constant, 0.0}
                                                 : Gap{SegmentKind::linear, sg[si].slope};
    gaps.push_back(g);
    knots.push_back({bp[i].x, bp[i].left, bp[i].value, bp[i].right});
  }

  size_t tail = bp_index_or_npos(M, hi);
  size_t si = tail != static_cast<size_t>(-1) ? tail - 1 : segment_left_of(hi);
  Gap g = sg[si].kind == SegmentKind::constant ? Gap{SegmentKind::constant, 0.0}
                                               : Gap{SegmentKind::linear, sg[si].slope};
  gaps.push_back(g);
  double vh = M.eval(hi, Side::value);
  knots.push_back({hi, M.eval(hi, Side::left), vh, vh});

  return assemble({lo, hi}, std::move(knots), std::move(gaps), /*clamp=*/true);
}

}  // namespace stieltjes
