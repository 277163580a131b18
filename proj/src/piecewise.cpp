#include "stieltjes/piecewise.hpp"

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

double poly_eval(const std::array<double, 4>& c, double x) {
  return ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
}

// Antiderivative value; only differences of these are used.
double poly_anti(const std::array<double, 4>& c, double x) {
  return (((c[3] / 4.0 * x + c[2] / 3.0) * x + c[1] / 2.0) * x + c[0]) * x;
}

double poly_deriv(const std::array<double, 4>& c, double x) {
  return (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1];
}

// Coefficients of p(alpha + beta * y) as a polynomial in y.  Exact in the
// sense of plain IEEE products/sums; degree never exceeds 3 because the
// substitution is affine.
std::array<double, 4> poly_affine_subst(const std::array<double, 4>& p, double alpha,
                                        double beta) {
  std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
  std::array<double, 4> tpow{1.0, 0.0, 0.0, 0.0};  // (alpha + beta y)^k
  for (int k = 0; k <= 3; ++k) {
    for (int d = 0; d <= 3; ++d) out[d] += p[k] * tpow[d];
    std::array<double, 4> next{0.0, 0.0, 0.0, 0.0};
    for (int d = 0; d <= 3; ++d) {
      next[d] += tpow[d] * alpha;
      if (d + 1 <= 3) next[d + 1] += tpow[d] * beta;
    }
    tpow = next;
  }
  return out;
}

}  // namespace

PiecewiseFn::PiecewiseFn(std::vector<double> boundaries, std::vector<std::array<double, 4>> pieces,
                         std::vector<double> point_values)
    : boundaries_(std::move(boundaries)),
      pieces_(std::move(pieces)),
      point_values_(std::move(point_values)) {
  validate();
}

void PiecewiseFn::validate() const {
  if (boundaries_.size() < 2) throw ValidationError("at least two piece boundaries required");
  if (pieces_.size() != boundaries_.size() - 1)
    throw ValidationError("piece count must be boundary count minus one");
  if (point_values_.size() != boundaries_.size())
    throw ValidationError("one stored value required per boundary, got " +
                          std::to_string(point_values_.size()) + " for " +
                          std::to_string(boundaries_.size()) + " boundaries");
  for (size_t i = 0; i < boundaries_.size(); ++i) {
    if (!std::isfinite(boundaries_[i]))
      throw ValidationError("boundaries[" + std::to_string(i) + "] is not finite");
    if (!std::isfinite(point_values_[i]))
      throw ValidationError("point_values[" + std::to_string(i) + "] is not finite");
    if (i > 0 && !(boundaries_[i - 1] < boundaries_[i]))
      throw ValidationError("boundaries must be strictly increasing at index " +
                            std::to_string(i));
  }
  for (size_t i = 0; i < pieces_.size(); ++i)
    for (double c : pieces_[i])
      if (!std::isfinite(c))
        throw ValidationError("pieces[" + std::to_string(i) + "] has a non-finite coefficient");
}

PiecewiseFn PiecewiseFn::polynomial(ClosedInterval domain, std::array<double, 4> coeffs) {
  // The input coefficients are in the global coordinate; shift to the local
  // origin at domain.lo.
  std::array<double, 4> local = poly_affine_subst(coeffs, domain.lo, 1.0);
  return PiecewiseFn({domain.lo, domain.hi}, {local},
                     {local[0], poly_eval(local, domain.hi - domain.lo)});
}

PiecewiseFn PiecewiseFn::constant(ClosedInterval domain, double level) {
  return polynomial(domain, {level, 0.0, 0.0, 0.0});
}

PiecewiseFn PiecewiseFn::coordinate(ClosedInterval domain) {
  return polynomial(domain, {0.0, 1.0, 0.0, 0.0});
}

double PiecewiseFn::eval(double x) const {
  if (!(x >= boundaries_.front() && x <= boundaries_.back()))
    throw DomainError("evaluation point " + fmt(x) + " outside domain [" +
                      fmt(boundaries_.front()) + ", " + fmt(boundaries_.back()) + "]");
  auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), x);
  if (it != boundaries_.end() && *it == x)
    return point_values_[static_cast<size_t>(it - boundaries_.begin())];
  size_t i = static_cast<size_t>(it - boundaries_.begin()) - 1;
  return poly_eval(pieces_[i], x - boundaries_[i]);
}

double PiecewiseFn::limit(double x, Side side) const {
  if (side == Side::value) return eval(x);
  if (!(x >= boundaries_.front() && x <= boundaries_.back()))
    throw DomainError("evaluation point " + fmt(x) + " outside domain");
  auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), x);
  if (it != boundaries_.end() && *it == x) {
    size_t i = static_cast<size_t>(it - boundaries_.begin());
    if (side == Side::left)
      return i == 0 ? point_values_[0]
                    : poly_eval(pieces_[i - 1], boundaries_[i] - boundaries_[i - 1]);
    return i + 1 == boundaries_.size() ? point_values_.back() : pieces_[i][0];
  }
  size_t i = static_cast<size_t>(it - boundaries_.begin()) - 1;
  return poly_eval(pieces_[i], x - boundaries_[i]);
}

PiecewiseFn sum(const PiecewiseFn& a, const PiecewiseFn& b) {
  if (a.domain().lo != b.domain().lo || a.domain().hi != b.domain().hi)
    throw ParameterError("cannot add piecewise functions on different domains");
  std::vector<double> bnds = a.boundaries();
  bnds.insert(bnds.end(), b.boundaries().begin(), b.boundaries().end());
  std::sort(bnds.begin(), bnds.end());
  bnds.erase(std::unique(bnds.begin(), bnds.end()), bnds.end());

  // Covering piece of f, re-anchored to the local origin at `u`.
  auto piece_at = [](const PiecewiseFn& f, double u) {
    const auto& fb = f.boundaries();
    size_t i = static_cast<size_t>(std::upper_bound(fb.begin(), fb.end(), u) - fb.begin());
    if (i > 0) --i;
    if (i >= f.pieces().size()) i = f.pieces().size() - 1;
    return poly_affine_subst(f.pieces()[i], u - fb[i], 1.0);
  };

  std::vector<std::array<double, 4>> pieces;
  pieces.reserve(bnds.size() - 1);
  for (size_t k = 0; k + 1 < bnds.size(); ++k) {
    auto pa = piece_at(a, bnds[k]);
    auto pb = piece_at(b, bnds[k]);
    std::array<double, 4> c{};
    for (int d = 0; d <= 3; ++d) c[d] = pa[d] + pb[d];
    pieces.push_back(c);
  }
  std::vector<double> pv;
  pv.reserve(bnds.size());
  for (double x : bnds) pv.push_back(a.eval(x) + b.eval(x));
  return PiecewiseFn(std::move(bnds), std::move(pieces), std::move(pv));
}

PiecewiseFn scale(const PiecewiseFn& f, double factor) {
  std::vector<std::array<double, 4>> pieces = f.pieces();
  for (auto& p : pieces)
    for (double& c : p) c *= factor;
  std::vector<double> pv = f.point_values();
  for (double& v : pv) v *= factor;
  return PiecewiseFn(f.boundaries(), std::move(pieces), std::move(pv));
}

bool is_monotone(const PiecewiseFn& f, bool increasing) {
  double sgn = increasing ? 1.0 : -1.0;
  const auto& bnds = f.boundaries();
  for (size_t i = 0; i < f.pieces().size(); ++i) {
    const auto& c = f.pieces()[i];
    double width = bnds[i + 1] - bnds[i];
    if (sgn * poly_deriv(c, 0.0) < 0.0 || sgn * poly_deriv(c, width) < 0.0) return false;
    // The derivative is quadratic; its interior extremum is the only other
    // candidate for a sign change.
    if (c[3] != 0.0) {
      double uc = -c[2] / (3.0 * c[3]);
      if (uc > 0.0 && uc < width && sgn * poly_deriv(c, uc) < 0.0) return false;
    }
  }
  for (size_t i = 0; i < bnds.size(); ++i) {
    double v = f.point_values()[i];
    if (i > 0 && sgn * (v - f.limit(bnds[i], Side::left)) < 0.0) return false;
    if (i + 1 < bnds.size() && sgn * (f.limit(bnds[i], Side::right) - v) < 0.0) return false;
  }
  return true;
}

double integrate(const PiecewiseFn& f, const LSMeasure& mu) {
  if (!(f.domain().lo <= mu.domain().lo && mu.domain().hi <= f.domain().hi))
    throw ParameterError("integrand domain does not cover the measure domain");

  double total = 0.0;
  for (const Atom& a : mu.atoms()) total += f.eval(a.location) * a.mass;

  std::vector<double> grid = mu.density_cuts();
  for (double b : f.boundaries())
    if (b > mu.domain().lo && b < mu.domain().hi) grid.push_back(b);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto& cuts = mu.density_cuts();
  const auto& den = mu.density();
  const auto& fb = f.boundaries();
  for (size_t k = 0; k + 1 < grid.size(); ++k) {
    double u = grid[k];
    double w = grid[k + 1];
    size_t di = static_cast<size_t>(std::upper_bound(cuts.begin(), cuts.end(), u) - cuts.begin());
    di = di > 0 ? di - 1 : 0;
    if (di >= den.size()) di = den.size() - 1;
    if (den[di] == 0.0) continue;
    size_t pi = static_cast<size_t>(std::upper_bound(fb.begin(), fb.end(), u) - fb.begin());
    pi = pi > 0 ? pi - 1 : 0;
    if (pi >= f.pieces().size()) pi = f.pieces().size() - 1;
    double o = fb[pi];
    total += den[di] * (poly_anti(f.pieces()[pi], w - o) - poly_anti(f.pieces()[pi], u - o));
  }
  return total;
}

PiecewiseFn compose_with_monotone(const PiecewiseFn& f, const MonotoneFn& W) {
  if (!(f.domain().lo <= W.min_value() && W.max_value() <= f.domain().hi))
    throw CompositionError("value range [" + fmt(W.min_value()) + ", " + fmt(W.max_value()) +
                           "] of the inner function leaves the integrand domain [" +
                           fmt(f.domain().lo) + ", " + fmt(f.domain().hi) + "]");

  const auto& wb = W.breakpoints();
  const auto& ws = W.segments();
  const auto& fb = f.boundaries();

  std::vector<double> bnds;
  std::vector<std::array<double, 4>> pieces;
  std::vector<double> pvals;

  auto add = [&](const std::array<double, 4>& piece, double y, double value) {
    // Solved crossing positions can collide under extreme scale separation;
    // drop the zero-width piece instead of breaking the ordering.
    if (y <= bnds.back()) return;
    pieces.push_back(piece);
    bnds.push_back(y);
    pvals.push_back(value);
  };

  auto covering_index = [&](double zlo) {
    size_t i = static_cast<size_t>(std::upper_bound(fb.begin(), fb.end(), zlo) - fb.begin());
    i = i > 0 ? i - 1 : 0;
    if (i >= f.pieces().size()) i = f.pieces().size() - 1;
    return i;
  };

  bnds.push_back(wb[0].x);
  pvals.push_back(f.eval(wb[0].value));

  for (size_t i = 0; i + 1 < wb.size(); ++i) {
    const Segment& s = ws[i];
    double next_value = f.eval(wb[i + 1].value);
    if (s.kind == SegmentKind::constant) {
      // W sits exactly at the anchor level on the open gap, so the composite
      // is the stored f value there, not a limit.
      add({f.eval(s.anchor), 0.0, 0.0, 0.0}, wb[i + 1].x, next_value);
      continue;
    }
    double A = wb[i].right;
    double B = wb[i + 1].left;
    double y0 = wb[i].x;
    // In the output piece's local coordinate t the inner argument is
    // u = alpha + slope * t with alpha the offset of the piece's start inside
    // the covering f piece.  Both stay at the scale of f's piece widths no
    // matter how steep the segment is, which keeps the composed coefficients'
    // contributions bounded by f's own values.
    auto add_linear = [&](double zlo, double y_end, double value) {
      size_t pi = covering_index(zlo);
      double alpha = (A - fb[pi]) + s.slope * (bnds.back() - y0);
      add(poly_affine_subst(f.pieces()[pi], alpha, s.slope), y_end, value);
    };
    size_t jlo = static_cast<size_t>(std::upper_bound(fb.begin(), fb.end(), A) - fb.begin());
    size_t jhi = static_cast<size_t>(std::lower_bound(fb.begin(), fb.end(), B) - fb.begin());
    double zprev = A;
    for (size_t j = jlo; j < jhi; ++j) {
      double z = fb[j];
      double ys = y0 + (z - A) / s.slope;
      if (ys > wb[i + 1].x) ys = wb[i + 1].x;
      add_linear(zprev, ys, f.eval(z));
      zprev = z;
    }
    add_linear(zprev, wb[i + 1].x, next_value);
  }

  return PiecewiseFn(std::move(bnds), std::move(pieces), std::move(pvals));
}

}  // namespace stieltjes
