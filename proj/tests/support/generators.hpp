#pragma once

#include <random>

#include "starext/scalar/exact_scalar.hpp"

namespace testgen {

using starext::ExactScalar;
using starext::GaussianRational;
using starext::Poly;

inline GaussianRational random_coeff(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-4, 4), den(1, 3), pick(0, 5);
  if (pick(rng) == 0) return GaussianRational(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
  return GaussianRational(mpq_class(num(rng), den(rng)));
}

/// Random polynomial in z1..zn, zb1..zbn of total degree <= max_degree.
inline Poly random_poly(std::mt19937_64& rng, int n, unsigned max_degree = 2, int terms = 3) {
  Poly p;
  std::uniform_int_distribution<int> var(0, 2 * n - 1);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  for (int t = 0; t < terms; ++t) {
    starext::Monomial m;
    unsigned d = deg(rng);
    for (unsigned k = 0; k < d; ++k) m = m * starext::Monomial::of(static_cast<starext::Var>(var(rng)));
    p.add_term(m, random_coeff(rng));
  }
  return p;
}

/// Polynomial or a quotient with a simple nonvanishing-ish denominator.
inline ExactScalar random_fraction(std::mt19937_64& rng, int n) {
  Poly num = random_poly(rng, n);
  std::uniform_int_distribution<int> pick(0, 2);
  if (pick(rng) == 0) return ExactScalar(num);
  Poly den = random_poly(rng, n, 1, 2) + Poly(3);
  if (den.is_zero()) den = Poly(1);
  return ExactScalar(num) / ExactScalar(den);
}

}  // namespace testgen

#include "starext/diffop/diffop.hpp"

namespace testgen {

/// Random operator of order <= max_order with polynomial coefficients.
inline starext::DiffOp random_op(std::mt19937_64& rng, starext::Chart chart, unsigned max_order = 2, int terms = 3) {
  starext::DiffOp d(chart);
  auto vars = starext::chart_variables(chart);
  std::uniform_int_distribution<std::size_t> var(0, vars.size() - 1);
  std::uniform_int_distribution<unsigned> ord(0, max_order);
  for (int t = 0; t < terms; ++t) {
    starext::DerivIndex alpha;
    unsigned k = ord(rng);
    for (unsigned i = 0; i < k; ++i) alpha = alpha.raised(vars[var(rng)]);
    d.add_term(alpha, ExactScalar(random_poly(rng, chart.n, 2, 2)));
  }
  return d;
}

}  // namespace testgen

#include "starext/abstract/aop.hpp"

namespace testgen {

/// Random homogeneous AOp of bidegree (q, r) with q >= r... built from
/// monomials t_{s_1}...t_{s_q} δ^j with Σ s_i + j = r.
inline starext::AOp random_homogeneous_aop(std::mt19937_64& rng, int q, int r, int terms = 3) {
  starext::AOp out;
  std::uniform_int_distribution<int> jd(0, r);
  for (int t = 0; t < terms; ++t) {
    int j = jd(rng);
    int left = r - j;
    starext::Monomial m;
    for (int i = 0; i < q; ++i) {
      int s = i + 1 == q ? left : std::uniform_int_distribution<int>(0, left)(rng);
      left -= s;
      m = m * starext::Monomial::of(starext::generator(s));
    }
    if (q == 0 && left > 0) continue;  // no generator slot to absorb the weight
    out.add_term(static_cast<unsigned>(j), Poly::term(random_coeff(rng), m));
  }
  return out;
}

inline starext::AOp random_aop(std::mt19937_64& rng, int max_delta = 2, int max_index = 2, int terms = 3) {
  starext::AOp out;
  std::uniform_int_distribution<int> jd(0, max_delta), sd(0, max_index), deg(0, 2);
  for (int t = 0; t < terms; ++t) {
    starext::Monomial m;
    int d = deg(rng);
    for (int i = 0; i < d; ++i) m = m * starext::Monomial::of(starext::generator(sd(rng)));
    out.add_term(static_cast<unsigned>(jd(rng)), Poly::term(random_coeff(rng), m));
  }
  return out;
}

}  // namespace testgen
