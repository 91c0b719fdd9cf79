#pragma once

// Independent reference implementations used as test oracles. They are
// written from the closed forms in extended precision and share no code with
// the library.

#include <cmath>
#include <cstdint>
#include <string>

namespace oracle {

inline long double h2(long double x) {
  if (x <= 0.0L || x >= 1.0L) return 0.0L;
  return -x * std::log2(x) - (1.0L - x) * std::log2(1.0L - x);
}

inline long double kl(long double p, long double q) {
  long double d = 0.0L;
  if (p > 0.0L) d += p * std::log(p / q);
  if (p < 1.0L) d += (1.0L - p) * std::log((1.0L - p) / (1.0L - q));
  return d;
}

inline long double poisson(unsigned n, long double mu) {
  long double term = std::exp(-mu);
  for (unsigned k = 1; k <= n; ++k) term *= mu / k;
  return term;
}

inline long double yield(unsigned n, long double eff, long double y0) {
  return 1.0L - (1.0L - y0) * std::pow(1.0L - eff, static_cast<long double>(n));
}

/// Gain and QBER at intensity `lambda` by brute-force summation to n = 200.
struct Gain {
  long double Q;
  long double E;
};

inline Gain gain(long double lambda, long double eff, long double y0, long double e_opt) {
  long double q = 0.0L, eq = 0.0L;
  for (unsigned n = 0; n <= 200; ++n) {
    const long double p = poisson(n, lambda);
    const long double yn = yield(n, eff, y0);
    q += p * yn;
    eq += p * (0.5L * y0 + e_opt * (yn - y0));
  }
  return {q, q > 0.0L ? eq / q : 0.0L};
}

}  // namespace oracle

namespace testutil {

/// Path of a scratch file in the build tree.
inline std::string scratch(const std::string& name) { return std::string("scratch_") + name; }

}  // namespace testutil
