#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "starext/diffop/diffop.hpp"

namespace starext {

using ScalarMatrix = std::vector<std::vector<ExactScalar>>;

/// Gaussian elimination over the fraction field. Throws SingularMetric.
ScalarMatrix invert_matrix(const ScalarMatrix& m);
ExactScalar determinant(const ScalarMatrix& m);

/// First derivatives of a (never materialized) potential and its metric.
struct PotentialGradient {
  Chart chart;
  std::vector<ExactScalar> phi;     ///< ∂Φ/∂z^k
  std::vector<ExactScalar> phibar;  ///< ∂Φ/∂zb^l (may be empty)
  ScalarMatrix g;                   ///< g[k][l] = g_{k lbar} = ∂Φ_k/∂zb^l
  ScalarMatrix ginv;                ///< ginv[l][k] = g^{lbar k}
  ExactScalar det_g;
};

/// Builds g from Φ_k and checks integrability against Φ_lbar when given.
/// Throws IntegrabilityError or SingularMetric.
PotentialGradient metric_from_gradient(std::vector<ExactScalar> phi, std::vector<ExactScalar> phibar);

/// Standard star product with separation of variables, truncated at ν^R.
/// L and R operators of plain functions are cached by their text; the caches
/// are write-once and safe to share between threads.
class StarProduct {
 public:
  StarProduct(PotentialGradient grad, int order);

  const PotentialGradient& gradient() const { return grad_; }
  const Chart& chart() const { return grad_.chart; }
  int order() const { return order_; }

  /// Left multiplication operator L_u: purely holomorphic derivatives,
  /// L_u 1 = u, commuting with Φ_lbar + ν∂/∂zb^l.
  FormalOp left_op(const FormalFunc& u) const;
  FormalOp left_op(const ExactScalar& u) const;
  /// Right multiplication operator R_b (mirror image).
  FormalOp right_op(const FormalFunc& b) const;
  FormalOp right_op(const ExactScalar& b) const;

  FormalFunc multiply(const FormalFunc& f, const FormalFunc& g) const;
  FormalFunc multiply(const ExactScalar& f, const ExactScalar& g) const;
  /// u^{*q}, q >= 0.
  FormalFunc power(const FormalFunc& u, int q) const;
  /// C_r(f, g) for plain functions.
  ExactScalar extract_C(int r, const ExactScalar& f, const ExactScalar& g) const;

  /// Seeds the cache, e.g. from disk. Ignored when the key is present.
  void preload_left(const std::string& key, FormalOp op) const;
  void preload_right(const std::string& key, FormalOp op) const;
  std::map<std::string, FormalOp> cached_left() const;
  std::map<std::string, FormalOp> cached_right() const;

 private:
  FormalOp solve(const FormalFunc& u, bool left) const;
  FormalOp plain_op(const ExactScalar& u, bool left) const;

  PotentialGradient grad_;
  int order_;
  // dg_left[i][j] caches holomorphic derivatives of M_left(i, j) = g_{i jbar};
  // dg_right[i][j] antiholomorphic derivatives of M_right(i, j) = g_{j ibar}.
  mutable std::mutex cache_mutex_;
  mutable std::map<std::string, FormalOp> left_cache_, right_cache_;
  mutable std::vector<std::vector<std::unique_ptr<DerivativeCache>>> dg_left_, dg_right_;
  mutable std::mutex dg_mutex_;
};

/// Berezin transform: B(ab) = b * a for holomorphic a, antiholomorphic b, in
/// the separated shape Σ c_{αβ} ∂_zb^α ∂_z^β. Probes use degree <= d (default R+2).
/// Throws Underdetermined when d is too small or the probes are inconsistent.
FormalOp berezin_transform(const StarProduct& star, std::optional<int> probe_degree = std::nullopt);

/// w with w*u = u*w = 1 mod ν^{R+1}. Throws NotUnit.
FormalFunc star_inverse(const StarProduct& star, const FormalFunc& u);

/// u with u^{*q} = v and zeroth component u0. Throws LeadingMismatch or NotUnit.
FormalFunc star_root(const StarProduct& star, const FormalFunc& v, int q, const ExactScalar& u0);

/// Coefficient matrix S_{lk} of S(u, v) = Σ S_{lk} ∂u/∂zb^l ∂v/∂z^k.
ScalarMatrix c3_obstruction_coefficients(const PotentialGradient& grad);
ExactScalar c3_obstruction_S(const PotentialGradient& grad, const ExactScalar& u, const ExactScalar& v);

}  // namespace starext
