#pragma once

#include <json.hpp>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "starext/diffop/diffop.hpp"
#include "starext/starprod/star_product.hpp"

namespace starext {

/// Hypersurface {ψ = 0}, units certified nonzero at the sample point x0.
struct DefiningData {
  Chart chart;
  Poly psi;
  std::vector<Poly> units;
  std::map<Var, GaussianRational> point;

  bool has_point() const { return !point.empty(); }
  /// Adds the nonconstant atoms of p that do not involve ψ (deduplicated).
  void declare_units_from(const ExactScalar& s);
  void declare_unit(const Poly& p);
};

/// Checks ψ(x0) = 0 and that every unit is nonzero at x0.
void validate_defining_data(const DefiningData& d);

struct ScalarVerdict {
  bool regular = false;
  ExactScalar normalized;
  int pole_order = 0;
};

/// Cancels ψ against the numerator. Throws UnrecognizedDenominatorFactor when a
/// denominator atom is neither ψ nor built from declared units.
ScalarVerdict scalar_extends(const ExactScalar& s, const DefiningData& d);

struct CoefficientVerdict {
  std::string location;
  bool regular = false;
  std::string normalized_text;
  int pole_order = 0;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string details;
};

struct ExtensionReport {
  std::vector<Check> checks;
  std::vector<CoefficientVerdict> coefficients;

  bool pass() const;
  void add(Check c) { checks.push_back(std::move(c)); }
  void merge(const ExtensionReport& o);
  nlohmann::json to_json() const;
};

/// Verdict for every coefficient of every ν-component. `label` prefixes the
/// locations; the single check is named after it.
ExtensionReport op_extends(const FormalOp& p, const DefiningData& d, const std::string& label = "operator");
/// Coefficientwise normalization; throws HypothesisFails on a residual pole.
DiffOp normalize(const DiffOp& a, const DefiningData& d);
FormalOp normalize(const FormalOp& p, const DefiningData& d);

/// 2n×2n matrix of ∂f_k/∂(z1, zb1, ..., zn, zbn).
ScalarMatrix frame_jacobian(const std::vector<ExactScalar>& funcs, const Chart& chart);
/// det of the Jacobian of the zeroth components at x0 (or symbolically constant
/// when no sample point is set) is nonzero.
bool frame_check(const std::vector<FormalFunc>& funcs, const DefiningData& d);

/// Bordered Hessian with corner ψ/(N+1).
ScalarMatrix monge_ampere(const Poly& psi, const Chart& chart, int n_family = 0);

struct CovectorGammaResult {
  bool frame_independent = false;
  bool gamma_nondegenerate = false;
  GaussianRational det_gamma;
};

/// Both sides of the covector / Monge-Ampère equivalence, computed separately.
/// Throws PivotVanishes when ∂ψ/∂z^s(x0) = 0.
CovectorGammaResult covector_gamma_equivalence(const Poly& psi, const Chart& chart,
                                               const std::map<Var, GaussianRational>& x0, int s);

/// Rebuilds A from A·1 and its nested commutators with the frame, descending
/// in order. Throws HypothesisFails (with the failing commutator) when some
/// datum is not ψ-regular.
DiffOp reconstruct_extension(const DiffOp& a, const std::vector<ExactScalar>& frame, DefiningData d);

/// Inputs of the extension theorem check.
struct TheoremInput {
  const StarProduct* star = nullptr;
  DefiningData data;
  std::vector<FormalFunc> frame;
  std::vector<FormalOp> frame_ops;
  /// Random associativity probes.
  int random_triples = 4;
  unsigned long long seed = 1;
  int max_degree = 2;
  /// Probe basis degree bound (default R + 1).
  int probe_degree = -1;
};

ExtensionReport check_theorem_ext(const TheoremInput& in);

/// Monomials in the chart variables of total degree <= d.
std::vector<ExactScalar> monomial_probes(const Chart& chart, int d);

/// Seeded random polynomial with Gaussian-rational coefficients.
ExactScalar random_probe(std::mt19937_64& rng, const Chart& chart, int max_degree);

}  // namespace starext
