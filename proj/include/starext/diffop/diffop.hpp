#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "starext/scalar/exact_scalar.hpp"

namespace starext {

/// Coordinate chart with holomorphic coordinates z1..zn and their conjugates.
struct Chart {
  int n = 1;
  friend bool operator==(const Chart&, const Chart&) = default;
};

void require_same_chart(const Chart& a, const Chart& b);

/// Derivative multi-index. Slot v counts derivatives in the chart variable with
/// the same global index (z_k -> slot 2(k-1), zb_k -> slot 2k-1).
class DerivIndex {
 public:
  static constexpr int kSlots = 2 * kMaxChartDim;

  DerivIndex() = default;
  static DerivIndex of(Var v, unsigned count = 1);
  /// Holomorphic multi-index (a_1, ..., a_n) on z1..zn.
  static DerivIndex holomorphic(std::span<const int> alpha);
  static DerivIndex antiholomorphic(std::span<const int> beta);

  unsigned operator[](Var v) const { return slots_[v]; }
  unsigned order() const;
  bool is_zero() const { return order() == 0; }
  /// Orders in the holomorphic / antiholomorphic families.
  unsigned holomorphic_order() const;
  unsigned antiholomorphic_order() const;
  std::vector<int> dz(int n) const;
  std::vector<int> dzbar(int n) const;

  DerivIndex operator+(const DerivIndex& o) const;
  /// Requires o <= *this componentwise.
  DerivIndex operator-(const DerivIndex& o) const;
  bool dominates(const DerivIndex& o) const;
  DerivIndex raised(Var v, unsigned by = 1) const;
  DerivIndex lowered(Var v) const;
  /// First slot with a nonzero count, or -1.
  int first_slot() const;
  /// Π α_v!.
  mpz_class factorial() const;

  friend auto operator<=>(const DerivIndex&, const DerivIndex&) = default;

  std::string to_string() const;

 private:
  std::array<std::uint8_t, kSlots> slots_{};
};

/// Π_v C(alpha_v, gamma_v).
mpz_class multi_binomial(const DerivIndex& alpha, const DerivIndex& gamma);

/// All multi-indices gamma with gamma <= alpha componentwise.
std::vector<DerivIndex> sub_indices(const DerivIndex& alpha);

/// All multi-indices over the given variables with total order exactly k.
std::vector<DerivIndex> indices_of_order(std::span<const Var> vars, unsigned k);

/// Mixed partial derivative ∂^alpha s.
ExactScalar partial(const ExactScalar& s, const DerivIndex& alpha);

/// Memoized derivatives of one scalar.
class DerivativeCache {
 public:
  explicit DerivativeCache(ExactScalar base) { table_.emplace(DerivIndex(), std::move(base)); }
  const ExactScalar& get(const DerivIndex& alpha);

 private:
  std::map<DerivIndex, ExactScalar> table_;
};

/// Finite-order differential operator Σ a_α ∂^α with coefficients written to
/// the left of derivatives.
class DiffOp {
 public:
  using TermMap = std::map<DerivIndex, ExactScalar>;

  DiffOp() = default;
  explicit DiffOp(Chart chart) : chart_(chart) {}
  static DiffOp zero(Chart chart) { return DiffOp(chart); }
  static DiffOp identity(Chart chart) { return multiplication(chart, ExactScalar(1)); }
  static DiffOp multiplication(Chart chart, const ExactScalar& s);
  /// s · ∂^alpha.
  static DiffOp term(Chart chart, const DerivIndex& alpha, const ExactScalar& s);
  /// ∂ / ∂v for a chart variable v.
  static DiffOp derivative(Chart chart, Var v) { return term(chart, DerivIndex::of(v), ExactScalar(1)); }

  const Chart& chart() const { return chart_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned order() const;
  /// Coefficient of ∂^alpha (zero when absent).
  ExactScalar coefficient(const DerivIndex& alpha) const;
  /// True when the operator involves no derivatives.
  bool is_multiplication() const;
  /// True when every derivative is holomorphic (resp. antiholomorphic).
  bool only_holomorphic() const;
  bool only_antiholomorphic() const;

  void add_term(const DerivIndex& alpha, const ExactScalar& s);

  DiffOp operator-() const;
  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  /// Left multiplication by a scalar.
  friend DiffOp operator*(const ExactScalar& s, const DiffOp& a);
  friend bool operator==(const DiffOp& a, const DiffOp& b);

  /// Applies the operator to a function.
  ExactScalar apply(const ExactScalar& f) const;
  /// Only the part of order exactly r.
  DiffOp top_part(unsigned r) const;
  /// Coefficientwise map (used for normalization).
  template <class F>
  DiffOp map_coefficients(F&& f) const {
    DiffOp r(chart_);
    for (const auto& [alpha, c] : terms_) r.add_term(alpha, f(alpha, c));
    return r;
  }

  /// Display text such as "z1^2*∂z1^2 + 1".
  std::string to_string() const;

 private:
  Chart chart_;
  TermMap terms_;
};

DiffOp compose(const DiffOp& a, const DiffOp& b);
DiffOp commutator(const DiffOp& a, const DiffOp& b);
DiffOp power(const DiffOp& a, unsigned k);

/// Truncated series Σ_{r<=R} ν^r f_r.
class FormalFunc {
 public:
  FormalFunc() = default;
  explicit FormalFunc(int order) : comps_(static_cast<std::size_t>(order) + 1) {}
  FormalFunc(int order, const ExactScalar& f0);
  explicit FormalFunc(std::vector<ExactScalar> comps) : comps_(std::move(comps)) {}

  int order() const { return static_cast<int>(comps_.size()) - 1; }
  const ExactScalar& operator[](int r) const { return comps_.at(static_cast<std::size_t>(r)); }
  ExactScalar& operator[](int r) { return comps_.at(static_cast<std::size_t>(r)); }
  const std::vector<ExactScalar>& components() const { return comps_; }
  FormalFunc truncated(int order) const;

  FormalFunc& operator+=(const FormalFunc& o);
  FormalFunc& operator-=(const FormalFunc& o);
  friend FormalFunc operator+(FormalFunc a, const FormalFunc& b) { return a += b; }
  friend FormalFunc operator-(FormalFunc a, const FormalFunc& b) { return a -= b; }
  friend FormalFunc operator*(const ExactScalar& s, FormalFunc f);
  friend bool operator==(const FormalFunc& a, const FormalFunc& b);

  /// "c0 + ν(c1) + ν^2(c2)" with zero components omitted.
  std::string to_string() const;

 private:
  std::vector<ExactScalar> comps_;
};

/// Truncated series Σ_{r<=R} ν^r D_r of differential operators.
class FormalOp {
 public:
  FormalOp() = default;
  FormalOp(Chart chart, int order);
  static FormalOp identity(Chart chart, int order);
  /// D placed at ν^power.
  static FormalOp single(const DiffOp& d, int order, int power = 0);

  const Chart& chart() const { return chart_; }
  int order() const { return static_cast<int>(comps_.size()) - 1; }
  const DiffOp& operator[](int r) const { return comps_.at(static_cast<std::size_t>(r)); }
  DiffOp& operator[](int r) { return comps_.at(static_cast<std::size_t>(r)); }
  const std::vector<DiffOp>& components() const { return comps_; }
  FormalOp truncated(int order) const;

  FormalOp operator-() const;
  FormalOp& operator+=(const FormalOp& o);
  FormalOp& operator-=(const FormalOp& o);
  friend FormalOp operator+(FormalOp a, const FormalOp& b) { return a += b; }
  friend FormalOp operator-(FormalOp a, const FormalOp& b) { return a -= b; }
  friend FormalOp operator*(const ExactScalar& s, const FormalOp& a);
  friend bool operator==(const FormalOp& a, const FormalOp& b);

  FormalFunc apply(const FormalFunc& f) const;
  FormalFunc apply(const ExactScalar& f) const;

  std::string to_string() const;

 private:
  Chart chart_;
  std::vector<DiffOp> comps_;
};

/// Composition modulo ν^{min(R_a, R_b)+1}.
FormalOp compose(const FormalOp& a, const FormalOp& b);
FormalOp commutator(const FormalOp& a, const FormalOp& b);
FormalOp power(const FormalOp& a, unsigned k);

/// Inverse of P = c·(1 + νT) via the truncated Neumann series Σ (-νT)^k ∘ c^{-1}.
/// Throws NotInvertible unless P_0 is multiplication by a nonzero scalar.
FormalOp invert_formal(const FormalOp& p);

/// Covector in chart slots (index = global variable index of z_k / zb_k).
using Covector = std::vector<ExactScalar>;
/// (∂f/∂z1, ∂f/∂zb1, ..., ∂f/∂zn, ∂f/∂zbn).
Covector differential(const ExactScalar& f, const Chart& chart);

/// Symmetric r-linear form on covectors: the polarized principal symbol.
class SymmetricForm {
 public:
  SymmetricForm(Chart chart, unsigned order, std::map<DerivIndex, ExactScalar> coeffs)
      : chart_(chart), order_(order), coeffs_(std::move(coeffs)) {}

  const Chart& chart() const { return chart_; }
  unsigned order() const { return order_; }
  /// a_α: coefficient of ξ^α in the unpolarized symbol Σ a_α ξ^α.
  ExactScalar coefficient(const DerivIndex& alpha) const;
  const std::map<DerivIndex, ExactScalar>& coefficients() const { return coeffs_; }
  /// p(c_1, ..., c_r); requires exactly order() covectors.
  ExactScalar evaluate(std::span<const Covector> covectors) const;
  /// Σ a_α ξ^α as a scalar in auxiliary variables xi<k> (dz_k) and eta<k> (dzb_k).
  ExactScalar as_polynomial() const;
  bool is_zero() const { return coeffs_.empty(); }

 private:
  Chart chart_;
  unsigned order_;
  std::map<DerivIndex, ExactScalar> coeffs_;
};

/// Throws OrderExceeds when order(A) > r.
SymmetricForm polarized_principal_symbol(const DiffOp& a, unsigned r);

/// [...[[A, f_1], f_2], ..., f_k] with multiplication operators f_i.
DiffOp nested_commutator(const DiffOp& a, std::span<const ExactScalar> functions);

/// Chart variables z1, zb1, ..., zn, zbn in slot order.
std::vector<Var> chart_variables(const Chart& chart);
std::vector<Var> holomorphic_variables(const Chart& chart);
std::vector<Var> antiholomorphic_variables(const Chart& chart);

}  // namespace starext
