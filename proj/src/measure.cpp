#include "stieltjes/measure.hpp"

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

}  // namespace

LSMeasure::LSMeasure(ClosedInterval domain, std::vector<Atom> atoms,
                     std::vector<double> density_cuts, std::vector<double> density)
    : domain_(domain),
      atoms_(std::move(atoms)),
      density_cuts_(std::move(density_cuts)),
      density_(std::move(density)) {
  validate();
}

void LSMeasure::validate() const {
  if (!(domain_.lo < domain_.hi)) throw ValidationError("measure domain is degenerate");
  if (density_cuts_.size() < 2 || density_cuts_.size() != density_.size() + 1)
    throw ValidationError("density cut count must be density cell count plus one");
  if (density_cuts_.front() != domain_.lo || density_cuts_.back() != domain_.hi)
    throw ValidationError("density cuts must span the domain");
  for (size_t i = 0; i + 1 < density_cuts_.size(); ++i)
    if (!(density_cuts_[i] < density_cuts_[i + 1]))
      throw ValidationError("density cuts must be strictly increasing");
  for (size_t i = 0; i < density_.size(); ++i)
    if (!(density_[i] >= 0.0) || !std::isfinite(density_[i]))
      throw ValidationError("density[" + std::to_string(i) + "] must be finite and nonnegative");
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!(a.mass > 0.0) || !std::isfinite(a.mass))
      throw ValidationError("atoms[" + std::to_string(i) + "] must carry positive finite mass");
    if (!domain_.contains(a.location))
      throw ValidationError("atoms[" + std::to_string(i) + "] lies outside the domain");
    if (i > 0 && !(atoms_[i - 1].location < a.location))
      throw ValidationError("atom locations must be strictly increasing at index " +
                            std::to_string(i));
  }
}

double LSMeasure::total_mass() const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass;
  for (size_t i = 0; i < density_.size(); ++i)
    total += density_[i] * (density_cuts_[i + 1] - density_cuts_[i]);
  return total;
}

double LSMeasure::atom_mass_at(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.location < v; });
  if (it != atoms_.end() && it->location == x) return it->mass;
  return 0.0;
}

LSMeasure measure_from(const MonotoneFn& F) {
  std::vector<Atom> atoms;
  for (const Breakpoint& b : F.breakpoints()) {
    double w = b.right - b.left;
    if (w > 0.0) atoms.push_back({b.x, w});
  }
  std::vector<double> cuts;
  cuts.reserve(F.breakpoints().size());
  for (const Breakpoint& b : F.breakpoints()) cuts.push_back(b.x);
  std::vector<double> density;
  density.reserve(F.segments().size());
  for (const Segment& s : F.segments()) density.push_back(s.slope);
  return LSMeasure(F.domain(), std::move(atoms), std::move(cuts), std::move(density));
}

double mass(const LSMeasure& mu, const IntervalQuery& q) {
  if (!(q.lo <= q.hi))
    throw ParameterError("interval [" + fmt(q.lo) + ", " + fmt(q.hi) + "] has lo > hi");
  if (!(q.lo >= mu.domain().lo && q.hi <= mu.domain().hi))
    throw ParameterError("interval [" + fmt(q.lo) + ", " + fmt(q.hi) +
                         "] leaves the measure domain [" + fmt(mu.domain().lo) + ", " +
                         fmt(mu.domain().hi) + "]");
  double total = 0.0;
  for (const Atom& a : mu.atoms()) {
    if (a.location < q.lo || a.location > q.hi) continue;
    if (a.location == q.lo && !q.lo_closed) continue;
    if (a.location == q.hi && !q.hi_closed) continue;
    total += a.mass;
  }
  const auto& cuts = mu.density_cuts();
  const auto& den = mu.density();
  for (size_t i = 0; i < den.size(); ++i) {
    if (den[i] == 0.0) continue;
    double u = std::max(cuts[i], q.lo);
    double w = std::min(cuts[i + 1], q.hi);
    if (w > u) total += den[i] * (w - u);
  }
  return total;
}

LSMeasure add(const LSMeasure& a, const LSMeasure& b) {
  if (a.domain().lo != b.domain().lo || a.domain().hi != b.domain().hi)
    throw ParameterError("cannot add measures on different domains");

  std::vector<Atom> atoms;
  size_t i = 0, j = 0;
  while (i < a.atoms().size() || j < b.atoms().size()) {
    if (j == b.atoms().size() ||
        (i < a.atoms().size() && a.atoms()[i].location < b.atoms()[j].location)) {
      atoms.push_back(a.atoms()[i++]);
    } else if (i == a.atoms().size() || b.atoms()[j].location < a.atoms()[i].location) {
      atoms.push_back(b.atoms()[j++]);
    } else {
      atoms.push_back({a.atoms()[i].location, a.atoms()[i].mass + b.atoms()[j].mass});
      ++i;
      ++j;
    }
  }

  std::vector<double> cuts = a.density_cuts();
  cuts.insert(cuts.end(), b.density_cuts().begin(), b.density_cuts().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto cell_value = [](const LSMeasure& m, double u) {
    const auto& c = m.density_cuts();
    auto it = std::upper_bound(c.begin(), c.end(), u);
    size_t k = static_cast<size_t>(it - c.begin()) - 1;
    if (k >= m.density().size()) k = m.density().size() - 1;
    return m.density()[k];
  };

  std::vector<double> density;
  density.reserve(cuts.size() - 1);
  for (size_t k = 0; k + 1 < cuts.size(); ++k)
    density.push_back(cell_value(a, cuts[k]) + cell_value(b, cuts[k]));

  return LSMeasure(a.domain(), std::move(atoms), std::move(cuts), std::move(density));
}

namespace {

void check_preimage_args(const LSMeasure& nu, const MonotoneFn& M, double x) {
  if (!M.domain().contains(x))
    throw ParameterError("query point " + fmt(x) + " outside the function domain");
  if (!(nu.domain().lo <= M.min_value() && M.max_value() <= nu.domain().hi))
    throw ParameterError("measure domain does not cover the value range of the function");
}

}  // namespace

double preimage_mass(const LSMeasure& nu, const MonotoneFn& M, double x) {
  check_preimage_args(nu, M, x);
  double lo = M.eval(M.domain().lo);
  double hi = M.eval(x, Side::right);
  return mass(nu, IntervalQuery::closed(lo, hi));
}

double preimage_mass_sup(const LSMeasure& nu, const MonotoneFn& M, double x) {
  check_preimage_args(nu, M, x);
  double lo = M.eval(M.domain().lo);
  double hi = M.eval(x, Side::right);
  IntervalQuery q{lo, hi, true, !constant_on_right(M, x)};
  return mass(nu, q);
}

double preimage_mass_between(const LSMeasure& nu, const MonotoneFn& M, double u, double w) {
  check_preimage_args(nu, M, u);
  check_preimage_args(nu, M, w);
  if (u > w) throw ParameterError("interval endpoints out of order");
  double ylo = M.eval(u, Side::left);
  double yhi = M.eval(w, Side::right);
  // The level M(u-) belongs to the set exactly when its inf-preimage is not
  // stuck left of u inside a flat run.
  IntervalQuery q{ylo, yhi, inf_preimage(M, ylo) >= u, true};
  return mass(nu, q);
}

double preimage_mass_sup_between(const LSMeasure& nu, const MonotoneFn& M, double u, double w) {
  check_preimage_args(nu, M, u);
  check_preimage_args(nu, M, w);
  if (u > w) throw ParameterError("interval endpoints out of order");
  double ylo = M.eval(u, Side::left);
  double yhi = M.eval(w, Side::right);
  IntervalQuery q{ylo, yhi, true, !constant_on_right(M, w)};
  return mass(nu, q);
}

}  // namespace stieltjes
