#pragma once

#include "stieltjes/monotone.hpp"
#include "stieltjes/piecewise.hpp"

namespace stieltjes {

enum class SampleRule { left, right, midpoint };

struct OracleConfig {
  double mesh = 1e-4;  // maximum cell width, > 0
  SampleRule rule = SampleRule::midpoint;
};

/// Brute-force partition-sum integrator used to cross-check the closed-form
/// path.  Partition points are the breakpoints of F plus the boundaries of f,
/// refined to the mesh; every partition point contributes an atom cell
/// f(p) * (F(p+) - F(p-)) and every open cell contributes f(sample) times the
/// cell's interior mass F(w-) - F(u+).  Converges to the closed-form integral
/// as the mesh shrinks.
///
/// Deliberately independent of the measure and integrand integration code:
/// jumps are recomputed from one-sided evaluation, never read from an atom
/// list, and summation proceeds in fixed ascending order.
double oracle_integrate(const PiecewiseFn& f, const MonotoneFn& F, const OracleConfig& cfg);

}  // namespace stieltjes
