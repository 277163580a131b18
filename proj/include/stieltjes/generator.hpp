#pragma once

#include <cstdint>
#include <random>

#include "stieltjes/monotone.hpp"
#include "stieltjes/piecewise.hpp"

namespace stieltjes {

/// Continuity imposed on the outer integrator at the flat levels of the
/// inner function when generating paired instances.
enum class FlatContinuity { free, right_continuous, left_continuous, continuous };

struct GeneratorOptions {
  int max_segments = 10;
  double jump_prob = 0.4;    // probability a knot carries a jump
  double flat_prob = 0.4;    // probability a piece is constant
  bool pow2_slopes = false;  // restrict slopes to powers of two
};

/// Seeded source of random exercise instances.  Every drawn quantity is a
/// dyadic rational (multiples of 1/1024; slopes optionally powers of two),
/// so breakpoint values, jump sizes and step subtractions are exact in
/// double precision and the identity checks can use tight tolerances.
/// The engine is a fixed-algorithm mt19937_64 and bounded draws avoid the
/// standard distributions, so a seed reproduces the same instances on any
/// platform.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  /// Increasing function with a random segment mix on a random dyadic
  /// domain.  Redrawn internally until non-constant, so generalized inverses
  /// always exist for generated instances.
  MonotoneFn monotone(const GeneratorOptions& opts = {});

  /// Increasing function on the given dyadic domain.
  MonotoneFn monotone_on(ClosedInterval domain, const GeneratorOptions& opts = {});

  /// Outer integrator whose domain covers the value range of `inner` (with
  /// random dyadic padding), with knots forced at every flat level of
  /// `inner` and the requested continuity imposed there.
  MonotoneFn outer_for(const MonotoneFn& inner, FlatContinuity mode,
                       const GeneratorOptions& opts = {});

  /// Piecewise polynomial on the domain: up to four pieces, degree <= 3,
  /// dyadic coefficients, arbitrary stored boundary values.  `continuous`
  /// yields a single global polynomial instead.
  PiecewiseFn integrand(ClosedInterval domain, bool continuous = false);

  /// Increasing piecewise-linear integrand with jumps (for the inequality
  /// checks); converted from a random increasing function, so the stored
  /// boundary values sit inside the jump gaps.
  PiecewiseFn monotone_integrand(ClosedInterval domain);

  /// Uniform multiple of 1/1024 in [lo, hi].
  double dyadic(double lo, double hi);
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  /// True with probability p.
  bool chance(double p);

 private:
  std::mt19937_64 rng_;

  MonotoneFn build(const std::vector<double>& positions, const std::vector<bool>& forced,
                   FlatContinuity mode, const GeneratorOptions& opts);
};

}  // namespace stieltjes
