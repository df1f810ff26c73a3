#pragma once

// Independent reference formulas used to freeze expected values.

#include <functional>

#include "starext/diffop/diffop.hpp"

namespace oracle {

using starext::ExactScalar;

/// Closed-form flat-chart coefficient Σ_{|α|=r} (1/α!) ∂_zb^α f ∂_z^α g,
/// computed by direct differentiation without any operator machinery.
inline ExactScalar wick_C(int r, const ExactScalar& f, const ExactScalar& g, int n) {
  ExactScalar total;
  std::vector<int> alpha(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == n - 1) {
      alpha[k] = left;
      ExactScalar df = f, dg = g;
      mpz_class fact = 1;
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < alpha[i]; ++c) {
          df = df.derivative(starext::antiholo(i + 1));
          dg = dg.derivative(starext::holo(i + 1));
          fact *= c + 1;
        }
      }
      total += ExactScalar(starext::GaussianRational(mpq_class(1, 1) / mpq_class(fact))) * df * dg;
      return;
    }
    for (int c = 0; c <= left; ++c) {
      alpha[k] = c;
      rec(k + 1, left - c);
    }
  };
  rec(0, r);
  return total;
}

}  // namespace oracle
