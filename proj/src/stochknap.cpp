#include "seqtest/stochknap.hpp"

#include <cmath>

namespace seqtest {

double theory_capital_c(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1)");
  }
  // mu - ln mu - 1 is increasing on mu > 1 and vanishes at mu = 1
  const double target = std::log(1.0 / epsilon);
  auto gap = [&](double mu) { return mu - std::log(mu) - 1.0 - target; };
  double lo = 1.0;
  double hi = 2.0;
  while (gap(hi) < 0.0) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  return 1.0 + 2.0 * hi / epsilon;
}

}  // namespace seqtest
