#pragma once

#include <vector>

#include "stieltjes/interval.hpp"
#include "stieltjes/monotone.hpp"

namespace stieltjes {

/// Point mass of strictly positive size.
struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Finite Borel measure on a closed interval, stored extensionally as a list
/// of atoms plus a piecewise-constant density.  The extensional form makes
/// interval queries exact sums over the stored parts and lets reports name
/// each contribution separately.
class LSMeasure {
 public:
  /// density_cuts has one more entry than density; cuts are strictly
  /// increasing, first = domain.lo, last = domain.hi.  Atoms must be strictly
  /// increasing in location, inside the domain, with positive mass.
  LSMeasure(ClosedInterval domain, std::vector<Atom> atoms, std::vector<double> density_cuts,
            std::vector<double> density);

  const ClosedInterval& domain() const { return domain_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<double>& density_cuts() const { return density_cuts_; }
  const std::vector<double>& density() const { return density_; }

  /// Sum of all atom masses plus the full density integral.
  double total_mass() const;

  /// Mass of the atom sitting exactly at x, zero when there is none.
  double atom_mass_at(double x) const;

 private:
  ClosedInterval domain_;
  std::vector<Atom> atoms_;
  std::vector<double> density_cuts_;
  std::vector<double> density_;

  void validate() const;
};

/// Measure induced by an increasing F: one atom per discontinuity with mass
/// equal to the gap between the one-sided limits (at the domain endpoints
/// this is the one-sided jump, matching the representation's conventions),
/// and density equal to the segment slopes.  Zero-mass atoms are dropped.
LSMeasure measure_from(const MonotoneFn& F);

/// Mass of an interval with independently open/closed endpoints: contained
/// atoms (an endpoint atom counts only when that side is closed) plus the
/// density integral.  A degenerate closed [x, x] returns the atom mass at x.
/// Throws ParameterError when lo > hi or the interval leaves the domain.
double mass(const LSMeasure& mu, const IntervalQuery& interval);

/// Union of two measures on the same domain: atoms merged (co-located atoms
/// add), densities added on the refined cut grid.
LSMeasure add(const LSMeasure& a, const LSMeasure& b);

/// nu-mass of { y : inf_preimage(M, y) <= x }, the pushforward mass of the
/// prefix [M.domain.lo, x] under the left generalized inverse.  By the
/// characterization inf_preimage(M, y) <= x iff y <= M(x+) this equals the
/// nu-mass of the closed interval [M(lo), M(x+)]; no inverse is constructed.
/// Requires x in M.domain and nu.domain covering the value range of M.
double preimage_mass(const LSMeasure& nu, const MonotoneFn& M, double x);

/// Mirror query for the right generalized inverse: nu-mass of
/// { y : sup_preimage(M, y) <= x }.  Same interval, except the top endpoint
/// M(x+) is excluded exactly when M is constant on a right neighborhood of x
/// (then levels equal to M(x+) have sup-preimage beyond x).
double preimage_mass_sup(const LSMeasure& nu, const MonotoneFn& M, double x);

/// nu-mass of { y : u <= inf_preimage(M, y) <= w }, the pushforward mass of
/// the closed interval [u, w] under the left generalized inverse.  The level
/// set is (M(u-), M(w+)] plus the bottom endpoint exactly when the
/// inf-preimage of M(u-) already reaches u (i.e. M is not constant just left
/// of u at that level).
double preimage_mass_between(const LSMeasure& nu, const MonotoneFn& M, double u, double w);

/// Mirror for the right generalized inverse: the level set is
/// [M(u-), M(w+)) with the top endpoint included exactly when M is not
/// constant on a right neighborhood of w.
double preimage_mass_sup_between(const LSMeasure& nu, const MonotoneFn& M, double u, double w);

}  // namespace stieltjes
