#pragma once

#include <random>

#include "circleop/operator.hpp"
#include "circleop/symbol.hpp"

namespace circleop::fixtures {

inline cplx random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  return {d(rng), d(rng)};
}

/// Random Laurent polynomial with modes in [lo, hi].
inline Symbol random_symbol(std::mt19937_64& rng, int lo, int hi, double scale = 1.0) {
  std::vector<std::pair<int, cplx>> terms;
  for (int n = lo; n <= hi; ++n) terms.emplace_back(n, random_complex(rng, scale));
  return make_symbol(terms);
}

inline Symbol random_symbol(std::mt19937_64& rng, int degree) { return random_symbol(rng, -degree, degree); }

inline CoeffVector random_vector(std::mt19937_64& rng, ModeWindow w) {
  CoeffVector v(w);
  for (int m = w.lo; m <= w.hi; ++m) v.at(m) = random_complex(rng);
  return v;
}

}  // namespace circleop::fixtures
