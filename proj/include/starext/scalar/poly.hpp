#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "starext/scalar/gaussian_rational.hpp"
#include "starext/scalar/variables.hpp"

namespace starext {

/// Exponent vector over the global variable table. Trailing zeros are trimmed
/// so equal monomials have identical storage.
class Monomial {
 public:
  Monomial() = default;
  static Monomial of(Var v, unsigned exp = 1);

  unsigned degree() const { return degree_; }
  unsigned exponent(Var v) const { return v < exps_.size() ? exps_[v] : 0u; }
  bool is_one() const { return degree_ == 0; }
  const std::vector<std::uint16_t>& exponents() const { return exps_; }

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  /// Requires divides(o) ... returns o / this.
  Monomial quotient_of(const Monomial& o) const;
  /// Lowers the exponent of v by one; requires exponent(v) > 0.
  Monomial lowered(Var v) const;
  Monomial raised(Var v, unsigned by = 1) const;

  /// Graded lexicographic order (total degree first, then z1 > zb1 > z2 > ...).
  friend bool grlex_less(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    return a.exps_ < b.exps_;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t v = 0; v < exps_.size(); ++v)
      if (exps_[v] != 0) f(static_cast<Var>(v), static_cast<unsigned>(exps_[v]));
  }

 private:
  void trim();
  std::vector<std::uint16_t> exps_;
  unsigned degree_ = 0;
};

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(b, a); }
};

/// Sparse polynomial over Q(i). Iteration runs from the leading term downwards
/// in the graded lexicographic order.
class Poly {
 public:
  using TermMap = std::map<Monomial, GaussianRational, GrlexGreater>;

  Poly() = default;
  Poly(const GaussianRational& c);  // NOLINT(google-explicit-constructor)
  Poly(long c) : Poly(GaussianRational(c)) {}  // NOLINT(google-explicit-constructor)
  static Poly variable(Var v);
  static Poly term(const GaussianRational& c, const Monomial& m);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant coefficient (zero for the zero polynomial).
  GaussianRational constant_term() const;
  std::size_t size() const { return terms_.size(); }
  unsigned degree() const;
  unsigned degree_in(Var v) const;
  const TermMap& terms() const { return terms_; }

  /// Requires !is_zero().
  const Monomial& leading_monomial() const { return terms_.begin()->first; }
  const GaussianRational& leading_coefficient() const { return terms_.begin()->second; }
  const Monomial& trailing_monomial() const { return terms_.rbegin()->first; }
  bool uses(Var v) const;
  /// Variables occurring with nonzero exponent, ascending.
  std::vector<Var> variables() const;

  void add_term(const Monomial& m, const GaussianRational& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const GaussianRational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const GaussianRational& c) { return a *= c; }
  friend Poly operator*(const GaussianRational& c, Poly a) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  Poly mul_monomial(const Monomial& m, const GaussianRational& c) const;
  Poly pow(unsigned e) const;
  Poly derivative(Var v) const;
  /// Leading coefficient scaled to one; returns the removed scale.
  std::pair<GaussianRational, Poly> monic() const;

  /// Exact evaluation; throws UnknownVariable when a used variable has no value.
  GaussianRational evaluate(const std::map<Var, GaussianRational>& point) const;

  /// Canonical parseable text in descending term order.
  std::string to_string() const;

  /// Deterministic total order on polynomials (for sorting factor lists).
  friend int compare(const Poly& a, const Poly& b);

 private:
  TermMap terms_;
};

/// Division by a single polynomial under the fixed monomial order:
/// p = quotient*d + remainder, no term of remainder divisible by LT(d).
struct Reduction {
  Poly quotient;
  Poly remainder;
};
Reduction reduce_single_divisor(const Poly& p, const Poly& d);

/// Exact quotient when d divides p; false otherwise. Applies cheap leading and
/// trailing monomial filters before dividing.
bool divide_exact(const Poly& p, const Poly& d, Poly& quotient);

}  // namespace starext
