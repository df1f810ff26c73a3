#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "starext/diffop/diffop.hpp"
#include "starext/scalar/poly.hpp"

namespace starext {

/// Element Σ_j p_j(t_0, t_1, ...) δ^j of the algebra generated by the t_k and
/// the derivation δ with δ t_k = t_{k+1}.
class AOp {
 public:
  using TermMap = std::map<unsigned, Poly>;

  AOp() = default;
  AOp(const Poly& p);  // NOLINT(google-explicit-constructor)
  static AOp t(int k) { return AOp(Poly::variable(generator(k))); }
  static AOp delta(unsigned power = 1);
  static AOp term(const Poly& p, unsigned delta_power);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Largest j with p_j != 0 (zero for the zero operator).
  unsigned order() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  Poly coefficient(unsigned j) const;
  void add_term(unsigned j, const Poly& p);

  AOp operator-() const;
  AOp& operator+=(const AOp& o);
  AOp& operator-=(const AOp& o);
  friend AOp operator+(AOp a, const AOp& b) { return a += b; }
  friend AOp operator-(AOp a, const AOp& b) { return a -= b; }
  /// Left multiplication by a polynomial in the t_k.
  friend AOp operator*(const Poly& p, const AOp& a);
  friend bool operator==(const AOp& a, const AOp& b) { return a.terms_ == b.terms_; }

  /// Display text, e.g. "1/2·t0·δ − 1/4·t1".
  std::string to_string() const;

 private:
  TermMap terms_;
};

/// δ applied to a polynomial as a derivation.
Poly delta_of(const Poly& p);

AOp compose_A(const AOp& x, const AOp& y);
AOp commutator_A(const AOp& x, const AOp& y);
AOp power_A(const AOp& x, unsigned k);

/// Result of the bidegree computation (t_s -> (1, s), δ -> (0, 1)).
struct Bidegree {
  enum class Kind { Zero, Homogeneous, NotHomogeneous };
  Kind kind = Kind::Zero;
  int first = 0;
  int second = 0;
  bool homogeneous() const { return kind != Kind::NotHomogeneous; }
  /// True for the zero operator or a homogeneous operator of bidegree (d1, d2).
  bool is(int d1, int d2) const { return kind == Kind::Zero || (kind == Kind::Homogeneous && first == d1 && second == d2); }
  std::string to_string() const;
};

Bidegree bidegree(const AOp& x);

/// Truncated series Σ_{r<=R} ν^r A_r.
class FormalAOp {
 public:
  FormalAOp() = default;
  explicit FormalAOp(int order) : comps_(static_cast<std::size_t>(order) + 1) {}
  int order() const { return static_cast<int>(comps_.size()) - 1; }
  const AOp& operator[](int r) const { return comps_.at(static_cast<std::size_t>(r)); }
  AOp& operator[](int r) { return comps_.at(static_cast<std::size_t>(r)); }
  const std::vector<AOp>& components() const { return comps_; }
  friend bool operator==(const FormalAOp& a, const FormalAOp& b);

  /// "t0 + ν(1/2·t0^3·δ + 3/4·t0^2·t1)".
  std::string to_string() const;

 private:
  std::vector<AOp> comps_;
};

FormalAOp compose_A(const FormalAOp& x, const FormalAOp& y);
FormalAOp power_A(const FormalAOp& x, unsigned k);

/// Σ_{i=0}^N t_0^{N-i} A ∘ t_0^i.
AOp division_operator(const AOp& a, int n);

/// Unique A with Σ_i t_0^{N-i} A ∘ t_0^i = t_0^{N(r+1)} B and order(A) <= r.
/// Throws OrderExceeds if order(B) > r.
AOp op_divide(const AOp& b, int r, int n);

/// Component k is (t_0^{N+1} δ)^k ∘ t_0^{N+1}.
FormalAOp build_S(int n, int order);

/// The root A = t_0 + ν A_1 + ... with A^{N+1} = S. Throws
/// InternalDivisibilityFailure carrying the failing order.
FormalAOp op_root(int n, int order);

/// Left division by t_0^m when every coefficient is divisible; false otherwise.
bool left_divide_t0(const AOp& x, unsigned m, AOp& quotient);

/// τ(t_k) = v^k(f), τ(δ) = v. Throws NotVectorField for non-derivations.
DiffOp tau_evaluate(const AOp& x, const ExactScalar& f, const DiffOp& v);
FormalOp tau_evaluate(const FormalAOp& x, const ExactScalar& f, const DiffOp& v);

/// Outcome of comparing two formal operators through their (N+1)-st powers.
struct EqualRootsReport {
  bool powers_equal = false;
  bool components_equal = false;
  /// First ν-order where A and B differ (-1 if none).
  int first_difference = -1;
  explicit operator bool() const { return powers_equal && components_equal; }
};

/// Requires A_0 = B_0 = multiplication by a nonzero scalar (else PreconditionViolated).
EqualRootsReport verify_equal_roots(const FormalOp& a, const FormalOp& b, int n);

/// Parses "t0^2*δ + 3/4*t1" (δ, "delta" or "d" for the derivation).
AOp parse_aop(std::string_view text);

nlohmann::json to_json(const FormalAOp& x);
nlohmann::json to_json(const AOp& x, int nu_power);

}  // namespace starext
