#include "starext/extension/extension.hpp"

#include <algorithm>
#include <sstream>

#include "starext/errors.hpp"

namespace starext {

namespace {

Poly monic_of(const Poly& p) { return p.monic().second; }

// Removes every factor of ψ from p; returns the count.
int strip_psi(Poly& p, const Poly& psi_monic) {
  if (psi_monic.is_zero() || psi_monic.is_constant()) return 0;
  int count = 0;
  Poly q;
  while (!p.is_constant() && divide_exact(p, psi_monic, q)) {
    p = std::move(q);
    ++count;
  }
  return count;
}

// True when p (nonconstant, ψ-free) is a product of declared units or divides one.
bool built_from_units(Poly p, const std::vector<Poly>& units) {
  Poly q;
  bool progress = true;
  while (!p.is_constant() && progress) {
    progress = false;
    for (const auto& u : units) {
      while (!p.is_constant() && divide_exact(p, u, q)) {
        p = std::move(q);
        progress = true;
      }
    }
  }
  if (p.is_constant()) return true;
  Poly m = monic_of(p);
  for (const auto& u : units)
    if (divide_exact(u, m, q)) return true;
  return false;
}

std::string location_text(const std::string& label, int nu_power, const DerivIndex& alpha) {
  std::string s = label + " ν^" + std::to_string(nu_power) + " ";
  s += alpha.is_zero() ? std::string("1") : alpha.to_string();
  return s;
}

}  // namespace

void DefiningData::declare_unit(const Poly& p) {
  if (p.is_zero() || p.is_constant()) return;
  Poly m = monic_of(p);
  if (std::find(units.begin(), units.end(), m) == units.end()) units.push_back(std::move(m));
}

void DefiningData::declare_units_from(const ExactScalar& s) {
  Poly psi_m = psi.is_zero() ? Poly() : monic_of(psi);
  Poly num = s.num();
  strip_psi(num, psi_m);
  declare_unit(num);
  for (const auto& f : s.den_factors()) {
    Poly a = *f.atom;
    strip_psi(a, psi_m);
    declare_unit(a);
  }
}

void validate_defining_data(const DefiningData& d) {
  if (!d.has_point()) return;
  if (!d.psi.is_zero() && !d.psi.evaluate(d.point).is_zero())
    throw PreconditionViolated("sample point is not on the hypersurface: psi(x0) = " +
                               d.psi.evaluate(d.point).to_string());
  for (const auto& u : d.units)
    if (u.evaluate(d.point).is_zero()) throw NotUnit("declared unit " + u.to_string() + " vanishes at x0");
}

ScalarVerdict scalar_extends(const ExactScalar& s, const DefiningData& d) {
  ScalarVerdict v;
  if (s.is_zero()) {
    v.regular = true;
    return v;
  }
  Poly psi_m = d.psi.is_zero() ? Poly() : monic_of(d.psi);
  std::vector<std::pair<Poly, int>> rest;
  int pole = 0;
  for (const auto& f : s.den_factors()) {
    Poly a = *f.atom;
    pole += f.exp * strip_psi(a, psi_m);
    if (a.is_constant()) continue;
    if (!built_from_units(a, d.units))
      throw UnrecognizedDenominatorFactor("denominator factor " + a.to_string() +
                                          " is neither psi nor a declared unit");
    rest.emplace_back(std::move(a), f.exp);
  }
  Poly num = s.num();
  Poly q;
  while (pole > 0 && divide_exact(num, psi_m, q)) {
    num = std::move(q);
    --pole;
  }
  ExactScalar out(num);
  for (const auto& [a, e] : rest) out /= ExactScalar(a).pow(e);
  // Leftover constants of stripped atoms.
  ExactScalar check = out;
  if (pole > 0) check /= ExactScalar(psi_m).pow(pole);
  if (!(check == s)) out *= s / check;
  if (pole > 0) out /= ExactScalar(psi_m).pow(pole);
  v.regular = pole == 0;
  v.pole_order = pole;
  v.normalized = std::move(out);
  return v;
}

bool ExtensionReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  for (const auto& c : coefficients)
    if (!c.regular) return false;
  return true;
}

void ExtensionReport::merge(const ExtensionReport& o) {
  checks.insert(checks.end(), o.checks.begin(), o.checks.end());
  coefficients.insert(coefficients.end(), o.coefficients.begin(), o.coefficients.end());
}

nlohmann::json ExtensionReport::to_json() const {
  nlohmann::json j;
  j["pass"] = pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
  j["coefficients"] = nlohmann::json::array();
  for (const auto& c : coefficients)
    j["coefficients"].push_back({{"location", c.location},
                                 {"regular", c.regular},
                                 {"normalized", c.normalized_text},
                                 {"pole_order", c.pole_order}});
  return j;
}

ExtensionReport op_extends(const FormalOp& p, const DefiningData& d, const std::string& label) {
  ExtensionReport rep;
  int bad = 0;
  for (int r = 0; r <= p.order(); ++r) {
    for (const auto& [alpha, c] : p[r].terms()) {
      ScalarVerdict v = scalar_extends(c, d);
      CoefficientVerdict cv;
      cv.location = location_text(label, r, alpha);
      cv.regular = v.regular;
      cv.pole_order = v.pole_order;
      cv.normalized_text = v.normalized.to_string();
      if (!v.regular) ++bad;
      rep.coefficients.push_back(std::move(cv));
    }
  }
  rep.add({label, bad == 0,
           bad == 0 ? std::to_string(rep.coefficients.size()) + " coefficients regular"
                    : std::to_string(bad) + " coefficients with a pole along psi"});
  return rep;
}

DiffOp normalize(const DiffOp& a, const DefiningData& d) {
  return a.map_coefficients([&](const DerivIndex& alpha, const ExactScalar& c) {
    ScalarVerdict v = scalar_extends(c, d);
    if (!v.regular)
      throw HypothesisFails(alpha.is_zero() ? "1" : alpha.to_string(),
                            "coefficient has a pole of order " + std::to_string(v.pole_order) + " along psi");
    return v.normalized;
  });
}

FormalOp normalize(const FormalOp& p, const DefiningData& d) {
  FormalOp out(p.chart(), p.order());
  for (int r = 0; r <= p.order(); ++r) out[r] = normalize(p[r], d);
  return out;
}

ScalarMatrix frame_jacobian(const std::vector<ExactScalar>& funcs, const Chart& chart) {
  auto vars = chart_variables(chart);
  ScalarMatrix j(funcs.size(), std::vector<ExactScalar>(vars.size()));
  for (std::size_t k = 0; k < funcs.size(); ++k)
    for (std::size_t i = 0; i < vars.size(); ++i) j[k][i] = funcs[k].derivative(vars[i]);
  return j;
}

bool frame_check(const std::vector<FormalFunc>& funcs, const DefiningData& d) {
  if (funcs.size() != static_cast<std::size_t>(2 * d.chart.n)) return false;
  std::vector<ExactScalar> zeroth;
  for (const auto& f : funcs) zeroth.push_back(f[0]);
  ScalarMatrix j = frame_jacobian(zeroth, d.chart);
  if (!d.has_point()) {
    ExactScalar det = determinant(j);
    return det.is_constant() && !det.is_zero();
  }
  ScalarMatrix at(j.size(), std::vector<ExactScalar>(j.size()));
  for (std::size_t a = 0; a < j.size(); ++a)
    for (std::size_t b = 0; b < j.size(); ++b) at[a][b] = ExactScalar(j[a][b].evaluate(d.point));
  return !determinant(at).is_zero();
}

ScalarMatrix monge_ampere(const Poly& psi, const Chart& chart, int n_family) {
  const int n = chart.n;
  ScalarMatrix g(static_cast<std::size_t>(n + 1), std::vector<ExactScalar>(static_cast<std::size_t>(n + 1)));
  for (int k = 1; k <= n; ++k) {
    Poly pk = psi.derivative(holo(k));
    for (int l = 1; l <= n; ++l) g[k - 1][l - 1] = ExactScalar(pk.derivative(antiholo(l)));
    g[k - 1][n] = ExactScalar(pk);
    g[n][k - 1] = ExactScalar(psi.derivative(antiholo(k)));
  }
  g[n][n] = ExactScalar(psi) / ExactScalar(static_cast<long>(n_family + 1));
  return g;
}

CovectorGammaResult covector_gamma_equivalence(const Poly& psi, const Chart& chart,
                                               const std::map<Var, GaussianRational>& x0, int s) {
  const int n = chart.n;
  if (s < 1 || s > n) throw PreconditionViolated("pivot index out of range");
  Poly ps = psi.derivative(holo(s));
  if (ps.evaluate(x0).is_zero())
    throw PivotVanishes("d psi / d z" + std::to_string(s) + " vanishes at the sample point");
  CovectorGammaResult res;
  // Zeroth components of the frame: f^s = ψ/ψ_s, f^k = ψ_k/ψ_s.
  ScalarMatrix cov(static_cast<std::size_t>(n), std::vector<ExactScalar>(static_cast<std::size_t>(n)));
  for (int k = 1; k <= n; ++k) {
    ExactScalar f = (k == s ? ExactScalar(psi) : ExactScalar(psi.derivative(holo(k)))) / ExactScalar(ps);
    for (int l = 1; l <= n; ++l) cov[k - 1][l - 1] = ExactScalar(f.derivative(antiholo(l)).evaluate(x0));
  }
  res.frame_independent = !determinant(cov).is_zero();
  ScalarMatrix gamma = monge_ampere(psi, chart);
  for (auto& row : gamma)
    for (auto& e : row) e = ExactScalar(e.evaluate(x0));
  ExactScalar det = determinant(gamma);
  res.det_gamma = det.is_zero() ? GaussianRational() : det.num().constant_term();
  res.gamma_nondegenerate = !res.det_gamma.is_zero();
  return res;
}

namespace {

// All nondecreasing tuples of length r from {0..m-1}.
void sorted_tuples(int m, int r, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == r) {
    out.push_back(cur);
    return;
  }
  for (int k = cur.empty() ? 0 : cur.back(); k < m; ++k) {
    cur.push_back(k);
    sorted_tuples(m, r, cur, out);
    cur.pop_back();
  }
}

std::string tuple_text(const std::vector<int>& t, const std::vector<ExactScalar>& frame) {
  std::string s = "A";
  for (int k : t) s = "[" + s + ", " + frame[static_cast<std::size_t>(k)].to_string() + "]";
  return s;
}

}  // namespace

DiffOp reconstruct_extension(const DiffOp& a, const std::vector<ExactScalar>& frame, DefiningData d) {
  const Chart chart = a.chart();
  const int m = 2 * chart.n;
  if (static_cast<int>(frame.size()) != m) throw PreconditionViolated("frame must have 2n functions");
  ScalarMatrix j = frame_jacobian(frame, chart);
  ExactScalar det = determinant(j);
  if (det.is_zero()) throw PreconditionViolated("frame differentials are dependent");
  d.declare_units_from(det);
  ScalarMatrix jinv = invert_matrix(j);
  auto vars = chart_variables(chart);

  DiffOp result(chart);
  DiffOp current = a;
  while (!current.is_zero()) {
    const unsigned r = current.order();
    if (r == 0) {
      ScalarVerdict v = scalar_extends(current.apply(ExactScalar(1)), d);
      if (!v.regular) throw HypothesisFails("A·1", "order-zero part has a pole along psi");
      result += DiffOp::multiplication(chart, v.normalized);
      break;
    }
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    sorted_tuples(m, static_cast<int>(r), cur, tuples);
    std::map<std::vector<int>, ExactScalar> values;
    for (const auto& t : tuples) {
      std::vector<ExactScalar> fs;
      for (int k : t) fs.push_back(frame[static_cast<std::size_t>(k)]);
      DiffOp v = nested_commutator(current, fs);
      if (!v.is_multiplication()) throw Error("nested commutator of full order is not a multiplication");
      ScalarVerdict sv = scalar_extends(v.apply(ExactScalar(1)), d);
      if (!sv.regular)
        throw HypothesisFails(tuple_text(t, frame), "nested commutator has a pole along psi");
      values.emplace(t, sv.normalized);
    }
    DiffOp b(chart);
    std::vector<Var> cv(vars.begin(), vars.end());
    for (const auto& alpha : indices_of_order(cv, r)) {
      std::vector<int> slots;
      for (std::size_t i = 0; i < vars.size(); ++i)
        for (unsigned c = 0; c < alpha[vars[i]]; ++c) slots.push_back(static_cast<int>(i));
      ExactScalar sum;
      std::vector<int> k(r, 0);
      while (true) {
        ExactScalar term(1);
        for (unsigned p = 0; p < r && !term.is_zero(); ++p)
          term *= jinv[static_cast<std::size_t>(slots[p])][static_cast<std::size_t>(k[p])];
        if (!term.is_zero()) {
          std::vector<int> key = k;
          std::sort(key.begin(), key.end());
          sum += term * values.at(key);
        }
        unsigned p = 0;
        while (p < r && ++k[p] == m) k[p++] = 0;
        if (p == r) break;
      }
      if (sum.is_zero()) continue;
      sum /= ExactScalar(GaussianRational(mpq_class(alpha.factorial())));
      ScalarVerdict sv = scalar_extends(sum, d);
      if (!sv.regular) throw HypothesisFails(alpha.to_string(), "reconstructed symbol has a pole along psi");
      b.add_term(alpha, sv.normalized);
    }
    result += b;
    current -= b;
    if (!current.is_zero() && current.order() >= r) throw Error("symbol reconstruction did not lower the order");
  }
  return result;
}

std::vector<ExactScalar> monomial_probes(const Chart& chart, int d) {
  auto vars = chart_variables(chart);
  std::vector<Var> cv(vars.begin(), vars.end());
  std::vector<ExactScalar> out;
  for (int k = 0; k <= d; ++k)
    for (const auto& alpha : indices_of_order(cv, static_cast<unsigned>(k))) {
      Monomial mono;
      for (Var v : cv) mono = mono * Monomial::of(v, alpha[v]);
      out.emplace_back(Poly::term(GaussianRational(1), mono));
    }
  return out;
}

ExactScalar random_probe(std::mt19937_64& rng, const Chart& chart, int max_degree) {
  auto vars = chart_variables(chart);
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3), deg(0, max_degree), terms(1, 3);
  std::uniform_int_distribution<std::size_t> var(0, vars.size() - 1);
  Poly p;
  int t = terms(rng);
  for (int i = 0; i < t; ++i) {
    Monomial mono;
    int dd = deg(rng);
    for (int k = 0; k < dd; ++k) mono = mono * Monomial::of(vars[var(rng)]);
    p.add_term(mono, GaussianRational(mpq_class(num(rng), den(rng))));
  }
  if (p.is_zero()) p = Poly(1);
  return ExactScalar(p);
}

ExtensionReport check_theorem_ext(const TheoremInput& in) {
  if (in.star == nullptr) throw PreconditionViolated("theorem check needs a star product");
  const StarProduct& star = *in.star;
  const DefiningData& d = in.data;
  ExtensionReport rep;

  if (in.frame.empty()) {
    rep.add({"frame", false, "no frame supplied"});
    // Without a frame the only candidate generators are the potential's own
    // operators L[Φ_k]; report where they blow up.
    const auto& phi = star.gradient().phi;
    bool ok = true;
    for (std::size_t k = 0; k < phi.size(); ++k) {
      std::string label = "L[Φ_" + std::to_string(k + 1) + "]";
      try {
        ExtensionReport r = op_extends(star.left_op(phi[k]), d, label);
        for (const auto& c : r.coefficients)
          if (!c.regular) rep.coefficients.push_back(c);
        ok = ok && r.pass();
      } catch (const Error& e) {
        ok = false;
        rep.coefficients.push_back({label, false, e.what(), -1});
      }
    }
    rep.add({"potential operators regular", ok, ok ? "" : "poles along psi"});
  } else {
    bool ok = false;
    std::string why;
    try {
      ok = frame_check(in.frame, d);
      const char* where = d.has_point() ? " at x0" : " on the chart";
      why = std::string(ok ? "differentials independent" : "differentials dependent") + where;
    } catch (const Error& e) {
      why = e.what();
    }
    rep.add({"frame", ok, why});
  }

  {
    bool ok = !in.frame_ops.empty();
    std::string why = ok ? "" : "no frame operators";
    for (std::size_t k = 0; k < in.frame_ops.size(); ++k) {
      try {
        ExtensionReport r = op_extends(in.frame_ops[k], d, "frame operator " + std::to_string(k + 1));
        ok = ok && r.pass();
        rep.coefficients.insert(rep.coefficients.end(), r.coefficients.begin(), r.coefficients.end());
      } catch (const Error& e) {
        ok = false;
        why = e.what();
      }
    }
    rep.add({"frame operators regular", ok, why.empty() ? std::to_string(in.frame_ops.size()) + " operators" : why});
  }

  {
    int degree = in.probe_degree >= 0 ? in.probe_degree : star.order() + 1;
    auto probes = monomial_probes(star.chart(), degree);
    int bad = 0;
    std::string why;
    for (const auto& u : probes) {
      std::string label = "L[" + u.to_string() + "]";
      try {
        ExtensionReport r = op_extends(star.left_op(u), d, label);
        if (!r.pass()) {
          ++bad;
          for (const auto& c : r.coefficients)
            if (!c.regular) rep.coefficients.push_back(c);
        }
      } catch (const Error& e) {
        ++bad;
        rep.coefficients.push_back({label, false, e.what(), -1});
      }
    }
    if (bad == 0) why = std::to_string(probes.size()) + " probes of degree <= " + std::to_string(degree);
    else why = std::to_string(bad) + " of " + std::to_string(probes.size()) + " probes have poles";
    rep.add({"probe operators regular", bad == 0, why});
  }

  {
    std::mt19937_64 rng(in.seed);
    bool ok = true;
    std::string why;
    for (int t = 0; t < in.random_triples && ok; ++t) {
      ExactScalar f = random_probe(rng, star.chart(), in.max_degree);
      ExactScalar g = random_probe(rng, star.chart(), in.max_degree);
      ExactScalar h = random_probe(rng, star.chart(), in.max_degree);
      FormalFunc ff(star.order(), f), gg(star.order(), g), hh(star.order(), h);
      if (!(star.multiply(star.multiply(ff, gg), hh) == star.multiply(ff, star.multiply(gg, hh)))) {
        ok = false;
        why = "associativity fails for f = " + f.to_string();
      }
    }
    if (ok) why = std::to_string(in.random_triples) + " random triples";
    rep.add({"extended product associative", ok, why});
  }

  {
    bool ok = true;
    std::string why;
    const auto& gi = star.gradient().ginv;
    for (std::size_t l = 0; l < gi.size(); ++l)
      for (std::size_t k = 0; k < gi[l].size(); ++k) {
        std::string label = "ginv[" + std::to_string(l + 1) + "][" + std::to_string(k + 1) + "]";
        try {
          ScalarVerdict v = scalar_extends(gi[l][k], d);
          rep.coefficients.push_back({label, v.regular, v.normalized.to_string(), v.pole_order});
          ok = ok && v.regular;
        } catch (const Error& e) {
          ok = false;
          why = e.what();
          rep.coefficients.push_back({label, false, e.what(), -1});
        }
      }
    rep.add({"inverse metric regular", ok, why});
  }
  return rep;
}

}  // namespace starext
