#include "stieltjes/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes {

namespace {

constexpr double kQuantum = 1.0 / 1024.0;

}  // namespace

int InstanceGenerator::uniform_int(int lo, int hi) {
  // Modulo bias is irrelevant at test-scale ranges and keeping the draw
  // free of std::uniform_int_distribution makes seeds portable.
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng_() % span);
}

double InstanceGenerator::dyadic(double lo, double hi) {
  auto klo = static_cast<long long>(std::ceil(lo / kQuantum));
  auto khi = static_cast<long long>(std::floor(hi / kQuantum));
  if (khi < klo) throw ParameterError("dyadic draw on empty range");
  auto span = static_cast<std::uint64_t>(khi - klo) + 1;
  return static_cast<double>(klo + static_cast<long long>(rng_() % span)) * kQuantum;
}

bool InstanceGenerator::chance(double p) {
  return static_cast<double>(rng_() >> 11) * 0x1p-53 < p;
}

MonotoneFn InstanceGenerator::build(const std::vector<double>& positions,
                                    const std::vector<bool>& forced, FlatContinuity mode,
                                    const GeneratorOptions& opts) {
  std::vector<Breakpoint> bps;
  std::vector<Segment> segs;
  bps.reserve(positions.size());
  double cur = dyadic(-2.0, 0.0);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    bool first = i == 0;
    bool last = i + 1 == positions.size();
    FlatContinuity m = forced[i] ? mode : FlatContinuity::free;
    // Forced knots exist to exercise the continuity mode, so jump more often.
    double p_jump = forced[i] ? 0.7 : opts.jump_prob;
    double l = cur, v = cur, r = cur;
    if (m != FlatContinuity::continuous && chance(p_jump)) {
      double d = dyadic(kQuantum, 0.5);
      if (m == FlatContinuity::right_continuous) {
        if (!first) v = r = l + d;  // pure left jump; impossible at the left endpoint
      } else if (m == FlatContinuity::left_continuous) {
        if (!last) r = l + d;  // pure right jump; impossible at the right endpoint
      } else if (first) {
        r = l + d;
      } else if (last) {
        v = r = l + d;
      } else {
        v = l + dyadic(0.0, d);
        r = l + d;
      }
    }
    bps.push_back({positions[i], l, v, r});
    cur = r;
    if (!last) {
      double slope = 0.0;
      if (!chance(opts.flat_prob)) {
        slope = opts.pow2_slopes ? std::ldexp(1.0, uniform_int(-2, 2))
                                 : dyadic(kQuantum, 2.0);
      }
      segs.push_back({slope == 0.0 ? SegmentKind::constant : SegmentKind::linear, slope, r});
      // Next knot arrives at exactly this value: dyadic slope times dyadic
      // length stays exact, so the validator's collinearity check is bitwise.
      cur = r + slope * (positions[i + 1] - positions[i]);
    }
  }
  return MonotoneFn({positions.front(), positions.back()}, bps, segs);
}

MonotoneFn InstanceGenerator::monotone_on(ClosedInterval domain, const GeneratorOptions& opts) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    int nseg = uniform_int(1, opts.max_segments);
    if (domain.hi - domain.lo < 4 * kQuantum) nseg = 1;
    std::vector<double> pos{domain.lo};
    for (int i = 0; i + 1 < nseg; ++i) {
      pos.push_back(dyadic(domain.lo + kQuantum, domain.hi - kQuantum));
    }
    pos.push_back(domain.hi);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    if (pos.size() < 2) continue;
    MonotoneFn fn = build(pos, std::vector<bool>(pos.size(), false), FlatContinuity::free, opts);
    if (fn.min_value() < fn.max_value()) return fn;
  }
  throw ValidationError("failed to draw a non-constant monotone function");
}

MonotoneFn InstanceGenerator::monotone(const GeneratorOptions& opts) {
  double lo = dyadic(-1.0, 1.0);
  double len = dyadic(0.5, 3.0);
  return monotone_on({lo, lo + len}, opts);
}

MonotoneFn InstanceGenerator::outer_for(const MonotoneFn& inner, FlatContinuity mode,
                                        const GeneratorOptions& opts) {
  FlatLevels flats = flat_levels(inner);
  double lo = inner.min_value() - dyadic(0.0, 0.5);
  double hi = inner.max_value() + dyadic(0.0, 0.5);
  std::vector<double> pos{lo, hi};
  for (const auto& lev : flats.levels) pos.push_back(lev.y);
  int extras = uniform_int(0, opts.max_segments - 1);
  for (int i = 0; i < extras; ++i) pos.push_back(dyadic(lo, hi));
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  std::vector<bool> forced(pos.size(), false);
  for (const auto& lev : flats.levels) {
    auto it = std::lower_bound(pos.begin(), pos.end(), lev.y);
    forced[static_cast<std::size_t>(it - pos.begin())] = true;
  }
  return build(pos, forced, mode, opts);
}

PiecewiseFn InstanceGenerator::integrand(ClosedInterval domain, bool continuous) {
  std::array<double, 4> coeffs{};
  int degree = uniform_int(0, 3);
  for (int k = 0; k <= degree; ++k) coeffs[static_cast<std::size_t>(k)] = dyadic(-2.0, 2.0);
  if (continuous) return PiecewiseFn::polynomial(domain, coeffs);

  int npieces = uniform_int(1, 4);
  std::vector<double> bnds{domain.lo};
  for (int i = 0; i + 1 < npieces; ++i) {
    bnds.push_back(dyadic(domain.lo + kQuantum, domain.hi - kQuantum));
  }
  bnds.push_back(domain.hi);
  std::sort(bnds.begin(), bnds.end());
  bnds.erase(std::unique(bnds.begin(), bnds.end()), bnds.end());

  std::vector<std::array<double, 4>> pieces;
  for (std::size_t i = 0; i + 1 < bnds.size(); ++i) {
    std::array<double, 4> c{};
    int deg = uniform_int(0, 3);
    for (int k = 0; k <= deg; ++k) c[static_cast<std::size_t>(k)] = dyadic(-2.0, 2.0);
    pieces.push_back(c);
  }
  std::vector<double> pv;
  pv.reserve(bnds.size());
  for (std::size_t i = 0; i < bnds.size(); ++i) pv.push_back(dyadic(-2.0, 2.0));
  return PiecewiseFn(bnds, pieces, pv);
}

PiecewiseFn InstanceGenerator::monotone_integrand(ClosedInterval domain) {
  MonotoneFn fn = monotone_on(domain, GeneratorOptions{});
  const auto& bps = fn.breakpoints();
  const auto& segs = fn.segments();
  std::vector<double> bnds;
  bnds.reserve(bps.size());
  for (const auto& b : bps) bnds.push_back(b.x);
  std::vector<std::array<double, 4>> pieces;
  pieces.reserve(segs.size());
  for (const auto& seg : segs) {
    // Piece-local coordinates make this exact: value at u is anchor + slope*u.
    pieces.push_back({seg.anchor, seg.slope, 0.0, 0.0});
  }
  std::vector<double> pv;
  pv.reserve(bps.size());
  for (const auto& b : bps) pv.push_back(b.value);
  return PiecewiseFn(bnds, pieces, pv);
}

}  // namespace stieltjes
