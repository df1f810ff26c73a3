#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "starext/scalar/poly.hpp"

namespace starext {

/// One factor of a denominator: a monic, nonconstant polynomial raised to a
/// positive power. Atoms are shared because the same few polynomials (ψ, its
/// derivatives, determinant factors) recur across thousands of coefficients.
struct DenFactor {
  std::shared_ptr<const Poly> atom;
  int exp = 0;
};

/// Element of the fraction field Q(i)(z, zb, ...), stored as num / Π atom^exp.
///
/// The form is not canonical: there is no multivariate GCD. Arithmetic results
/// are reduced by trial division of the numerator by each denominator atom,
/// which cancels every common factor that is itself an atom. Equality is
/// decided by cross-multiplication, i.e. a == b iff num(a - b) == 0.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(const Poly& p) : num_(p) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(Poly&& p) : num_(std::move(p)) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(const GaussianRational& c) : num_(c) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(long c) : num_(c) {}  // NOLINT(google-explicit-constructor)

  static ExactScalar variable(Var v) { return ExactScalar(Poly::variable(v)); }
  /// num / den without any cancellation; den is split against `hints` only.
  static ExactScalar fraction(const Poly& num, const Poly& den);
  /// num / Π factors with no cancellation (keeps artificial common factors).
  static ExactScalar unreduced(Poly num, std::vector<DenFactor> den);

  const Poly& num() const { return num_; }
  const std::vector<DenFactor>& den_factors() const { return den_; }
  /// Expanded denominator polynomial.
  Poly den() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  bool is_one() const { return den_.empty() && num_ == Poly(1); }

  ExactScalar operator-() const;
  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o);
  ExactScalar& operator/=(const ExactScalar& o);
  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

  /// Cross-multiplication equality.
  friend bool operator==(const ExactScalar& a, const ExactScalar& b);
  /// Same numerator and same factor list (representation identity).
  bool same_representation(const ExactScalar& o) const;

  ExactScalar inverse() const;
  ExactScalar pow(int e) const;
  ExactScalar derivative(Var v) const;

  /// Throws DenominatorVanishes when some atom vanishes at the point.
  GaussianRational evaluate(const std::map<Var, GaussianRational>& point) const;

  /// Parseable text; "(num)/((a)^2*(b))" when a denominator is present.
  std::string to_string() const;

  /// Multiplies the denominator by `p` (split against existing atoms and the
  /// optional hints). Used for inverses.
  ExactScalar divided_by_poly(const Poly& p, std::span<const std::shared_ptr<const Poly>> hints = {}) const;

 private:
  void cancel();
  Poly num_;
  std::vector<DenFactor> den_;  // sorted by atom, unique atoms, exp > 0
};

/// Splits p = c · Π atom^e against `known` atoms (repeated trial division);
/// whatever does not divide becomes a fresh monic atom.
struct AtomSplit {
  GaussianRational scale;
  std::vector<DenFactor> factors;
};
AtomSplit split_into_atoms(const Poly& p, std::span<const std::shared_ptr<const Poly>> known);

/// Convenience: the scalar for a single chart coordinate.
inline ExactScalar z(int k) { return ExactScalar::variable(holo(k)); }
inline ExactScalar zb(int k) { return ExactScalar::variable(antiholo(k)); }

}  // namespace starext
