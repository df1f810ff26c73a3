#pragma once

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "starext/abstract/aop.hpp"
#include "starext/extension/extension.hpp"
#include "starext/starprod/star_product.hpp"

namespace starext {

/// A fully assembled setting: potential, star product, frame and the
/// identities that were verified while building it.
struct Scenario {
  std::string name;
  std::string kind;
  Chart chart;
  int order = 0;
  DefiningData data;
  std::shared_ptr<StarProduct> star;
  int n_family = 0;
  std::optional<ExactScalar> chi;
  int pivot = 0;
  std::vector<FormalFunc> frame;
  std::vector<FormalOp> frame_ops;
  std::vector<Check> construction;
  /// Named intermediate results (display text) for reports.
  nlohmann::json extras = nlohmann::json::object();

  const PotentialGradient& gradient() const { return star->gradient(); }
};

/// Φ_k = zb_k.
Scenario build_flat(int n, int order);

/// Φ_k = ψ_k/ψ. `pivot` 0 picks the first s with ψ_s(x0) != 0.
/// Throws PivotVanishes, LeviDegenerate or PreconditionViolated.
Scenario build_hypersurface_log(const Poly& psi, const Chart& chart, const std::map<Var, GaussianRational>& x0,
                                int order, int pivot = 0, const std::vector<Poly>& extra_units = {});

/// Φ_k = ψ^{-N-1} ψ_k. Without χ a monomial root of 1/ψ_s is searched for
/// (RootDatumMissing when none exists); a supplied χ must satisfy
/// χ^{N+1} ψ_s = 1 (RootDatumInvalid). Throws PipelineDisagreement when the two
/// constructions of the pivot frame operator differ.
Scenario build_psiN_family(const Poly& psi, const Chart& chart, const std::map<Var, GaussianRational>& x0,
                           int n_family, int order, std::optional<ExactScalar> chi = std::nullopt, int pivot = 0,
                           const std::vector<Poly>& extra_units = {});

/// Chart of the p×r matrix space, z_{kα} -> z_{(k-1)r+α}. Throws SizeLimit for pr > 4.
Scenario build_grassmannian(int p, int r, int order);

/// Arbitrary gradient (Φ_lbar optional) with no frame; used as a negative control.
Scenario build_generic(const std::vector<ExactScalar>& phi, const std::vector<ExactScalar>& phibar,
                       const Poly& psi, const std::map<Var, GaussianRational>& x0, int order,
                       const std::vector<Poly>& extra_units = {});

/// Rational root of 1/c·m for c·m a monomial in ψ_s; nullopt when none.
std::optional<ExactScalar> monomial_root_datum(const Poly& psi_s, int degree);

struct SuiteSettings {
  int random_triples = 20;
  unsigned long long seed = 1;
  int max_degree = 2;
  int probe_degree = -1;
};

/// Associativity, standard quantization, separation and unity checks.
std::vector<Check> run_invariant_suite(const Scenario& sc, const SuiteSettings& st);

/// Theorem check on the scenario's frame and probe operators.
ExtensionReport check_theorem_ext(const Scenario& sc, const SuiteSettings& st);

/// Grassmannian variable z_{kα} for an r-column chart.
inline Var grassmannian_z(int k, int alpha, int r) { return holo((k - 1) * r + alpha); }
inline Var grassmannian_zb(int k, int alpha, int r) { return antiholo((k - 1) * r + alpha); }

}  // namespace starext
