#include "stieltjes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes {

double oracle_integrate(const PiecewiseFn& f, const MonotoneFn& F, const OracleConfig& cfg) {
  if (!(cfg.mesh > 0.0)) throw ParameterError("oracle mesh must be positive");
  if (!(f.domain().lo <= F.domain().lo && F.domain().hi <= f.domain().hi))
    throw ParameterError("integrand domain does not cover the integrator domain");

  std::vector<double> seeds;
  for (const Breakpoint& b : F.breakpoints()) seeds.push_back(b.x);
  for (double b : f.boundaries())
    if (b > F.domain().lo && b < F.domain().hi) seeds.push_back(b);
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  double total = 0.0;
  for (double p : seeds) {
    double jump = F.eval(p, Side::right) - F.eval(p, Side::left);
    if (jump != 0.0) total += f.eval(p) * jump;
  }

  for (size_t k = 0; k + 1 < seeds.size(); ++k) {
    double p = seeds[k];
    double q = seeds[k + 1];
    auto cells = static_cast<long>(std::ceil((q - p) / cfg.mesh));
    if (cells < 1) cells = 1;
    double h = (q - p) / static_cast<double>(cells);
    for (long c = 0; c < cells; ++c) {
      double u = p + static_cast<double>(c) * h;
      double w = c + 1 == cells ? q : p + static_cast<double>(c + 1) * h;
      double cell_mass = F.eval(w, Side::left) - F.eval(u, Side::right);
      if (cell_mass == 0.0) continue;
      double xi = u;
      switch (cfg.rule) {
        case SampleRule::left: xi = u; break;
        case SampleRule::right: xi = w; break;
        case SampleRule::midpoint: xi = 0.5 * (u + w); break;
      }
      total += f.eval(xi) * cell_mass;
    }
  }
  return total;
}

}  // namespace stieltjes
