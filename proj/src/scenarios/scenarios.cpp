#include "starext/scenarios/scenarios.hpp"

#include <gmp.h>

#include <random>

#include "starext/errors.hpp"

namespace starext {

namespace {

FormalOp mult(const Chart& chart, const ExactScalar& s, int order) {
  return FormalOp::single(DiffOp::multiplication(chart, s), order);
}

// s · ∂/∂v placed at ν^power.
FormalOp deriv_term(const Chart& chart, const ExactScalar& s, Var v, int order, int power) {
  return FormalOp::single(DiffOp::term(chart, DerivIndex::of(v), s), order, power);
}

void record(Scenario& sc, std::string name, bool pass, std::string details = {}) {
  sc.construction.push_back({std::move(name), pass, std::move(details)});
}

// Requires a construction identity; failing ones are kept in the report.
void require(Scenario& sc, const std::string& name, bool pass, const std::string& details = {}) {
  record(sc, name, pass, pass ? details : (details.empty() ? "identity does not hold" : details));
}

int choose_pivot(const Poly& psi, const Chart& chart, const std::map<Var, GaussianRational>& x0, int pivot) {
  if (pivot != 0) {
    if (pivot < 1 || pivot > chart.n) throw PreconditionViolated("pivot index out of range");
    if (psi.derivative(holo(pivot)).evaluate(x0).is_zero())
      throw PivotVanishes("d psi / d z" + std::to_string(pivot) + " vanishes at the sample point");
    return pivot;
  }
  for (int s = 1; s <= chart.n; ++s)
    if (!psi.derivative(holo(s)).evaluate(x0).is_zero()) return s;
  throw PivotVanishes("every d psi / d z^s vanishes at the sample point");
}

DefiningData hypersurface_data(const Poly& psi, const Chart& chart, const std::map<Var, GaussianRational>& x0,
                               const std::vector<Poly>& extra_units) {
  DefiningData d;
  d.chart = chart;
  d.psi = psi;
  d.point = x0;
  for (const auto& u : extra_units) d.declare_unit(u);
  for (Var v : chart_variables(chart))
    if (x0.find(v) == x0.end()) throw PreconditionViolated("sample point lacks a value for " + name_of(v));
  if (!psi.evaluate(x0).is_zero()) throw PreconditionViolated("sample point is not on psi = 0");
  return d;
}

void check_levi(const Poly& psi, const Chart& chart, const std::map<Var, GaussianRational>& x0, int n_family,
                DefiningData& d, Scenario& sc) {
  ScalarMatrix gamma = monge_ampere(psi, chart, n_family);
  ExactScalar det = determinant(gamma);
  GaussianRational at = det.is_zero() ? GaussianRational() : det.evaluate(x0);
  if (at.is_zero()) throw LeviDegenerate("det of the bordered Hessian vanishes at the sample point");
  d.declare_units_from(det);
  sc.extras["det_gamma"] = det.to_string();
  sc.extras["det_gamma_at_x0"] = at.to_string();
}

std::vector<FormalFunc> plain_coordinates(const Chart& chart, int order) {
  std::vector<FormalFunc> out;
  for (int k = 1; k <= chart.n; ++k) out.emplace_back(order, z(k));
  return out;
}

std::vector<FormalOp> coordinate_ops(const Chart& chart, int order) {
  std::vector<FormalOp> out;
  for (int k = 1; k <= chart.n; ++k) out.push_back(mult(chart, z(k), order));
  return out;
}

// Exact (N+1)-th root of a rational, if any.
std::optional<mpq_class> rational_root(const mpq_class& c, int degree) {
  if (sgn(c) == 0) return std::nullopt;
  bool neg = sgn(c) < 0;
  if (neg && degree % 2 == 0) return std::nullopt;
  mpz_class num = abs(c.get_num()), den = c.get_den(), rn, rd;
  if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(degree)) == 0) return std::nullopt;
  if (mpz_root(rd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(degree)) == 0) return std::nullopt;
  mpq_class r(rn, rd);
  r.canonicalize();
  return neg ? mpq_class(-r) : r;
}

}  // namespace

std::optional<ExactScalar> monomial_root_datum(const Poly& psi_s, int degree) {
  if (psi_s.size() != 1) return std::nullopt;
  const auto& [mono, c] = *psi_s.terms().begin();
  if (!c.is_real()) return std::nullopt;
  auto root = rational_root(c.re(), degree);
  if (!root) return std::nullopt;
  Monomial m;
  bool ok = true;
  mono.for_each([&](Var v, unsigned e) {
    if (e % static_cast<unsigned>(degree) != 0) ok = false;
    else m = m * Monomial::of(v, e / static_cast<unsigned>(degree));
  });
  if (!ok) return std::nullopt;
  return ExactScalar(Poly::term(GaussianRational(*root), m)).inverse();
}

Scenario build_flat(int n, int order) {
  if (n < 1 || n > kMaxChartDim) throw SizeLimit("chart dimension out of range");
  Scenario sc;
  sc.name = "flat";
  sc.kind = "flat";
  sc.chart = Chart{n};
  sc.order = order;
  sc.data.chart = sc.chart;
  std::vector<ExactScalar> phi, phibar;
  for (int k = 1; k <= n; ++k) {
    phi.push_back(zb(k));
    phibar.push_back(z(k));
  }
  sc.star = std::make_shared<StarProduct>(metric_from_gradient(phi, phibar), order);
  sc.frame = plain_coordinates(sc.chart, order);
  sc.frame_ops = coordinate_ops(sc.chart, order);
  for (int k = 1; k <= n; ++k) {
    FormalOp lz = sc.star->left_op(zb(k));
    FormalOp expected = mult(sc.chart, zb(k), order);
    if (order >= 1) expected += deriv_term(sc.chart, ExactScalar(1), holo(k), order, 1);
    require(sc, "L[zb" + std::to_string(k) + "] = zb + ν∂z", lz == expected, lz.to_string());
    sc.frame.emplace_back(order, zb(k));
    sc.frame_ops.push_back(lz);
  }
  return sc;
}

Scenario build_hypersurface_log(const Poly& psi, const Chart& chart, const std::map<Var, GaussianRational>& x0,
                                int order, int pivot, const std::vector<Poly>& extra_units) {
  Scenario sc;
  sc.name = "hypersurface_log";
  sc.kind = "hypersurface_log";
  sc.chart = chart;
  sc.order = order;
  sc.data = hypersurface_data(psi, chart, x0, extra_units);
  const int s = choose_pivot(psi, chart, x0, pivot);
  sc.pivot = s;
  check_levi(psi, chart, x0, 0, sc.data, sc);

  const ExactScalar p(psi);
  const Poly ps = psi.derivative(holo(s));
  sc.data.declare_unit(ps);
  validate_defining_data(sc.data);

  std::vector<ExactScalar> phi, phibar;
  for (int k = 1; k <= chart.n; ++k) {
    phi.push_back(ExactScalar(psi.derivative(holo(k))) / p);
    phibar.push_back(ExactScalar(psi.derivative(antiholo(k))) / p);
  }
  sc.star = std::make_shared<StarProduct>(metric_from_gradient(phi, phibar), order);
  const StarProduct& star = *sc.star;

  const ExactScalar ps_inv = ExactScalar(ps).inverse();
  FormalOp q = FormalOp::identity(chart, order);
  if (order >= 1) q += deriv_term(chart, p * ps_inv, holo(s), order, 1);
  FormalOp q_inv = invert_formal(q);

  FormalOp l_phi_s = star.left_op(phi[static_cast<std::size_t>(s - 1)]);
  FormalOp xs = compose(q_inv, mult(chart, ps_inv * p, order));
  require(sc, "X^s inverts L[Φ_s]", xs == invert_formal(l_phi_s));

  sc.frame = plain_coordinates(chart, order);
  sc.frame_ops = coordinate_ops(chart, order);
  for (int k = 1; k <= chart.n; ++k) {
    FormalOp xk;
    ExactScalar expected0;
    if (k == s) {
      xk = xs;
      expected0 = p * ps_inv;
    } else {
      ExactScalar pk(psi.derivative(holo(k)));
      FormalOp inner = mult(chart, ps_inv * pk, order);
      if (order >= 1) inner += deriv_term(chart, ps_inv * p, holo(k), order, 1);
      xk = compose(q_inv, inner);
      expected0 = pk * ps_inv;
    }
    FormalFunc fk = xk.apply(ExactScalar(1));
    std::string tag = "f^" + std::to_string(k);
    require(sc, tag + " zeroth component", fk[0] == expected0, fk[0].to_string());
    require(sc, "X^" + std::to_string(k) + " = L[" + tag + "]", xk == star.left_op(fk));
    sc.extras[tag] = fk.to_string();
    sc.frame.push_back(fk);
    sc.frame_ops.push_back(xk);
  }
  require(sc, "frame built", frame_check(sc.frame, sc.data));
  return sc;
}

Scenario build_psiN_family(const Poly& psi, const Chart& chart, const std::map<Var, GaussianRational>& x0,
                           int n_family, int order, std::optional<ExactScalar> chi, int pivot,
                           const std::vector<Poly>& extra_units) {
  if (n_family < 1) throw PreconditionViolated("family parameter N must be positive");
  Scenario sc;
  sc.name = "psiN_family";
  sc.kind = "psiN_family";
  sc.chart = chart;
  sc.order = order;
  sc.n_family = n_family;
  sc.data = hypersurface_data(psi, chart, x0, extra_units);
  const int s = choose_pivot(psi, chart, x0, pivot);
  sc.pivot = s;
  check_levi(psi, chart, x0, n_family, sc.data, sc);

  const int e = n_family + 1;
  const ExactScalar p(psi);
  const Poly ps = psi.derivative(holo(s));
  if (!chi) {
    chi = monomial_root_datum(ps, e);
    if (!chi)
      throw RootDatumMissing("no rational root of degree " + std::to_string(e) + " of 1/(" + ps.to_string() + ")");
  }
  if (!(chi->pow(e) * ExactScalar(ps) == ExactScalar(1)))
    throw RootDatumInvalid("chi^" + std::to_string(e) + " * d psi/d z" + std::to_string(s) + " is not 1");
  sc.chi = chi;
  sc.data.declare_unit(ps);
  for (const auto& f : chi->den_factors()) sc.data.declare_unit(*f.atom);
  sc.data.declare_unit(chi->num());
  validate_defining_data(sc.data);

  const ExactScalar pe = p.pow(e), pe_inv = p.pow(-e);
  std::vector<ExactScalar> phi, phibar;
  for (int k = 1; k <= chart.n; ++k) {
    phi.push_back(pe_inv * ExactScalar(psi.derivative(holo(k))));
    phibar.push_back(pe_inv * ExactScalar(psi.derivative(antiholo(k))));
  }
  sc.star = std::make_shared<StarProduct>(metric_from_gradient(phi, phibar), order);
  const StarProduct& star = *sc.star;
  const auto& grad = star.gradient();

  // g = ψ^{-N-1} X, g^{-1} = ψ^{N+1} A with A the upper-left block of Γ_N^{-1}.
  ScalarMatrix gamma = monge_ampere(psi, chart, n_family);
  ScalarMatrix gamma_inv = invert_matrix(gamma);
  bool metric_ok = true, inverse_ok = true;
  for (int k = 1; k <= chart.n; ++k)
    for (int l = 1; l <= chart.n; ++l) {
      ExactScalar x = ExactScalar(psi.derivative(holo(k)).derivative(antiholo(l))) -
                      ExactScalar(static_cast<long>(e)) * ExactScalar(psi.derivative(holo(k))) *
                          ExactScalar(psi.derivative(antiholo(l))) / p;
      metric_ok = metric_ok && grad.g[k - 1][l - 1] == pe_inv * x;
      inverse_ok = inverse_ok && grad.ginv[l - 1][k - 1] == pe * gamma_inv[l - 1][k - 1];
    }
  require(sc, "g = psi^{-N-1} X", metric_ok);
  require(sc, "g^{-1} = psi^{N+1} A", inverse_ok);
  ExactScalar det_gamma = determinant(gamma);
  require(sc, "det Gamma_N = psi^{1+n(N+1)} det g / (N+1)",
          det_gamma == p.pow(1 + chart.n * e) * grad.det_g / ExactScalar(static_cast<long>(e)));
  require(sc, "det Gamma_N(x0) != 0 iff g invertible", !grad.det_g.is_zero());
  sc.extras["g"] = grad.g[0][0].to_string();
  sc.extras["ginv"] = grad.ginv[0][0].to_string();

  const ExactScalar ps_inv = ExactScalar(ps).inverse();
  FormalOp q = FormalOp::identity(chart, order);
  if (order >= 1) q += deriv_term(chart, pe * ps_inv, holo(s), order, 1);
  FormalOp q_inv = invert_formal(q);
  FormalOp l_phi_s_inv = invert_formal(star.left_op(phi[static_cast<std::size_t>(s - 1)]));
  require(sc, "inverse of L[Φ_s] factorizes", l_phi_s_inv == compose(q_inv, mult(chart, ps_inv * pe, order)));

  // Pivot frame function, two ways.
  FormalAOp a = op_root(n_family, order);
  DiffOp v = -DiffOp::derivative(chart, holo(s));
  FormalOp tau_a = tau_evaluate(a, p * *chi, v);
  FormalOp tau_s = tau_evaluate(build_S(n_family, order), p * *chi, v);
  require(sc, "tau(S) inverts L[Φ_s]", tau_s == l_phi_s_inv);
  FormalFunc u = star_root(star, FormalFunc(order, phi[static_cast<std::size_t>(s - 1)]), -e, p * *chi);
  FormalOp l_u = star.left_op(u);
  EqualRootsReport roots = verify_equal_roots(tau_a, l_u, n_family);
  if (!roots || !(tau_a == l_u))
    throw PipelineDisagreement("tau(A) and L_u differ at order " + std::to_string(roots.first_difference));
  record(sc, "tau(A) = L_u", true, "componentwise through order " + std::to_string(order));
  sc.extras["abstract_root"] = a.to_string();
  sc.extras["u"] = u.to_string();

  sc.frame = plain_coordinates(chart, order);
  sc.frame_ops = coordinate_ops(chart, order);
  for (int k = 1; k <= chart.n; ++k) {
    std::string tag = "f^" + std::to_string(k);
    if (k == s) {
      FormalFunc fs = tau_a.apply(ExactScalar(1));
      require(sc, tag + " zeroth component = psi chi", fs[0] == p * *chi, fs[0].to_string());
      sc.extras[tag] = fs.to_string();
      sc.frame.push_back(fs);
      sc.frame_ops.push_back(tau_a);
      continue;
    }
    FormalOp inner = mult(chart, ps_inv * ExactScalar(psi.derivative(holo(k))), order);
    if (order >= 1) inner += deriv_term(chart, ps_inv * pe, holo(k), order, 1);
    FormalOp xk = compose(q_inv, inner);
    FormalFunc fk = xk.apply(ExactScalar(1));
    require(sc, "X^" + std::to_string(k) + " = L[" + tag + "]", xk == star.left_op(fk));
    sc.extras[tag] = fk.to_string();
    sc.frame.push_back(fk);
    sc.frame_ops.push_back(xk);
  }
  require(sc, "frame built", frame_check(sc.frame, sc.data));
  return sc;
}

Scenario build_grassmannian(int p, int r, int order) {
  if (p < 1 || r < 1 || p * r > 4) throw SizeLimit("matrix chart limited to p*r <= 4");
  const int n = p * r;
  Scenario sc;
  sc.name = "grassmannian";
  sc.kind = "grassmannian";
  sc.chart = Chart{n};
  sc.order = order;
  const Chart chart = sc.chart;
  auto zz = [&](int k, int a) { return ExactScalar::variable(grassmannian_z(k, a, r)); };
  auto zzb = [&](int k, int a) { return ExactScalar::variable(grassmannian_zb(k, a, r)); };
  auto idx = [&](int k, int a) { return static_cast<std::size_t>((k - 1) * r + a - 1); };
  auto delta = [](int a, int b) { return ExactScalar(a == b ? 1L : 0L); };

  ScalarMatrix psi_m(static_cast<std::size_t>(r), std::vector<ExactScalar>(static_cast<std::size_t>(r)));
  for (int a = 1; a <= r; ++a)
    for (int b = 1; b <= r; ++b) {
      ExactScalar e = delta(a, b);
      for (int k = 1; k <= p; ++k) e -= zzb(k, a) * zz(k, b);
      psi_m[a - 1][b - 1] = e;
    }
  ExactScalar det_psi = determinant(psi_m);
  ScalarMatrix chi = invert_matrix(psi_m);
  sc.data.chart = chart;
  sc.data.psi = det_psi.num();

  std::vector<ExactScalar> phi(static_cast<std::size_t>(n)), phibar(static_cast<std::size_t>(n));
  for (int k = 1; k <= p; ++k)
    for (int c = 1; c <= r; ++c) {
      ExactScalar a, b;
      for (int al = 1; al <= r; ++al) {
        a -= chi[c - 1][al - 1] * zzb(k, al);
        b -= zz(k, al) * chi[al - 1][c - 1];
      }
      phi[idx(k, c)] = a;
      phibar[idx(k, c)] = b;
    }
  sc.star = std::make_shared<StarProduct>(metric_from_gradient(phi, phibar), order);
  const StarProduct& star = *sc.star;
  const auto& grad = star.gradient();

  // u_{ϰk} = -Φ_{z_{kϰ}}.
  bool scalar_ok = true;
  for (int c = 1; c <= r; ++c)
    for (int b = 1; b <= r; ++b) {
      ExactScalar sum;
      for (int k = 1; k <= p; ++k) sum -= phi[idx(k, c)] * zz(k, b);
      scalar_ok = scalar_ok && sum == chi[c - 1][b - 1] - delta(c, b);
    }
  require(sc, "sum_k u z = chi - delta", scalar_ok);

  // Σ_γ ψ_{αγ} ∂/∂z_{kγ} at ν^1.
  auto psi_d = [&](int a, int k) {
    FormalOp t(chart, order);
    if (order < 1) return t;
    for (int g = 1; g <= r; ++g) t += deriv_term(chart, psi_m[a - 1][g - 1], grassmannian_z(k, g, r), order, 1);
    return t;
  };
  bool lu_ok = true;
  for (int c = 1; c <= r && lu_ok; ++c)
    for (int k = 1; k <= p && lu_ok; ++k) {
      FormalOp expected(chart, order);
      for (int a = 1; a <= r; ++a) expected += chi[c - 1][a - 1] * (mult(chart, zzb(k, a), order) - psi_d(a, k));
      lu_ok = star.left_op(-phi[idx(k, c)]) == expected;
    }
  require(sc, "L[u] closed form", lu_ok);

  using OpMatrix = std::vector<std::vector<FormalOp>>;
  auto matmul = [&](const OpMatrix& x, const OpMatrix& y) {
    OpMatrix out(x.size(), std::vector<FormalOp>(y[0].size(), FormalOp(chart, order)));
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < y[0].size(); ++j)
        for (std::size_t l = 0; l < y.size(); ++l) out[i][j] += compose(x[i][l], y[l][j]);
    return out;
  };
  OpMatrix ident(static_cast<std::size_t>(r), std::vector<FormalOp>(static_cast<std::size_t>(r), FormalOp(chart, order)));
  OpMatrix t_m = ident;
  for (int a = 1; a <= r; ++a) {
    ident[a - 1][a - 1] = FormalOp::identity(chart, order);
    for (int b = 1; b <= r; ++b) {
      if (order < 1) continue;
      for (int k = 1; k <= p; ++k)
        for (int l = 1; l <= r; ++l)
          t_m[a - 1][b - 1] +=
              deriv_term(chart, psi_m[a - 1][l - 1] * zz(k, b), grassmannian_z(k, l, r), order, 1);
    }
  }
  OpMatrix m_m = ident;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) m_m[a][b] -= t_m[a][b];
  // Q = (1 - νT)^{-1} = Σ (νT)^j.
  OpMatrix q_m = ident;
  for (int j = 0; j < order; ++j) {
    q_m = matmul(t_m, q_m);
    for (int a = 0; a < r; ++a) q_m[a][a] += FormalOp::identity(chart, order);
  }
  require(sc, "M Q = Q M = 1", matmul(m_m, q_m) == ident && matmul(q_m, m_m) == ident);

  OpMatrix l_chi(static_cast<std::size_t>(r), std::vector<FormalOp>(static_cast<std::size_t>(r)));
  OpMatrix chi_ops = l_chi;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      l_chi[a][b] = star.left_op(chi[a][b]);
      chi_ops[a][b] = mult(chart, chi[a][b], order);
    }
  require(sc, "L[chi] = chi M", l_chi == matmul(chi_ops, m_m));

  OpMatrix psi_ops = chi_ops;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) psi_ops[a][b] = mult(chart, psi_m[a][b], order);
  OpMatrix j_m = matmul(q_m, psi_ops);
  require(sc, "J L[chi] = 1", matmul(j_m, l_chi) == ident);

  sc.frame = plain_coordinates(chart, order);
  sc.frame_ops = coordinate_ops(chart, order);
  std::vector<FormalFunc> fbar(static_cast<std::size_t>(n));
  std::vector<FormalOp> kops(static_cast<std::size_t>(n));
  bool f_ok = true, k_ok = true, poly_ok = true;
  for (int b = 1; b <= r; ++b)
    for (int k = 1; k <= p; ++k) {
      FormalOp kk(chart, order);
      for (int a = 1; a <= r; ++a) kk += compose(q_m[b - 1][a - 1], mult(chart, zzb(k, a), order) - psi_d(a, k));
      FormalFunc f = kk.apply(ExactScalar(1));
      f_ok = f_ok && f == FormalFunc(order, zzb(k, b));
      k_ok = k_ok && kk == star.left_op(zzb(k, b));
      for (const auto& comp : kk.components())
        for (const auto& [alpha, c] : comp.terms()) poly_ok = poly_ok && c.is_polynomial();
      fbar[idx(k, b)] = f;
      kops[idx(k, b)] = kk;
    }
  require(sc, "f^{beta k} = zb_{k beta}", f_ok);
  require(sc, "K = L[zb]", k_ok);
  require(sc, "K has polynomial coefficients", poly_ok);
  sc.frame.insert(sc.frame.end(), fbar.begin(), fbar.end());
  sc.frame_ops.insert(sc.frame_ops.end(), kops.begin(), kops.end());
  sc.extras["L_zb1"] = kops[0].to_string();

  // Bivector coefficient against g^{(tα)(sβ)}.
  std::optional<ExactScalar> ratio;
  bool ratio_ok = true;
  for (int s = 1; s <= p; ++s)
    for (int t = 1; t <= p; ++t)
      for (int a = 1; a <= r; ++a)
        for (int b = 1; b <= r; ++b) {
          ExactScalar left = delta(s, t), right = delta(a, b);
          for (int g = 1; g <= r; ++g) left -= zz(s, g) * zzb(t, g);
          for (int k = 1; k <= p; ++k) right -= zzb(k, a) * zz(k, b);
          ExactScalar coeff = ExactScalar(GaussianRational::i()) * left * right;
          const ExactScalar& gl = grad.ginv[idx(t, a)][idx(s, b)];
          if (!ratio && !gl.is_zero()) ratio = coeff / gl;
          if (!ratio) {
            ratio_ok = ratio_ok && coeff.is_zero();
            continue;
          }
          ratio_ok = ratio_ok && coeff == *ratio * gl;
        }
  ratio_ok = ratio_ok && ratio && ratio->is_constant();
  require(sc, "bivector proportional to the inverse metric", ratio_ok);
  if (ratio) sc.extras["bivector_ratio"] = ratio->to_string();
  require(sc, "frame built", frame_check(sc.frame, sc.data));
  return sc;
}

Scenario build_generic(const std::vector<ExactScalar>& phi, const std::vector<ExactScalar>& phibar, const Poly& psi,
                       const std::map<Var, GaussianRational>& x0, int order, const std::vector<Poly>& extra_units) {
  Scenario sc;
  sc.name = "generic";
  sc.kind = "generic";
  sc.chart = Chart{static_cast<int>(phi.size())};
  sc.order = order;
  sc.data.chart = sc.chart;
  sc.data.psi = psi;
  sc.data.point = x0;
  for (const auto& u : extra_units) sc.data.declare_unit(u);
  sc.star = std::make_shared<StarProduct>(metric_from_gradient(phi, phibar), order);
  sc.data.declare_units_from(sc.star->gradient().det_g);
  validate_defining_data(sc.data);
  return sc;
}

std::vector<Check> run_invariant_suite(const Scenario& sc, const SuiteSettings& st) {
  const StarProduct& star = *sc.star;
  const Chart& chart = sc.chart;
  const int order = sc.order;
  const auto& grad = star.gradient();
  std::vector<Check> out;

  {
    std::mt19937_64 rng(st.seed);
    int bad = 0;
    std::string first;
    for (int t = 0; t < st.random_triples; ++t) {
      FormalFunc f(order, random_probe(rng, chart, st.max_degree));
      FormalFunc g(order, random_probe(rng, chart, st.max_degree));
      FormalFunc h(order, random_probe(rng, chart, st.max_degree));
      FormalFunc lhs = star.multiply(star.multiply(f, g), h);
      FormalFunc rhs = star.multiply(f, star.multiply(g, h));
      if (!(lhs == rhs)) {
        if (bad++ == 0) first = "f = " + f[0].to_string() + ", g = " + g[0].to_string() + ", h = " + h[0].to_string();
      }
    }
    out.push_back({"associativity", bad == 0,
                   bad == 0 ? std::to_string(st.random_triples) + " seeded triples, zero residual"
                            : std::to_string(bad) + " failing triples, first: " + first});
  }

  {
    bool ok = true;
    std::string why;
    for (int k = 1; k <= chart.n; ++k) {
      FormalOp expected = mult(chart, grad.phi[static_cast<std::size_t>(k - 1)], order);
      if (order >= 1) expected += deriv_term(chart, ExactScalar(1), holo(k), order, 1);
      if (!(star.left_op(grad.phi[static_cast<std::size_t>(k - 1)]) == expected)) {
        ok = false;
        why = "L[Φ_" + std::to_string(k) + "]";
      }
    }
    for (std::size_t l = 0; l < grad.phibar.size(); ++l) {
      FormalOp expected = mult(chart, grad.phibar[l], order);
      if (order >= 1) expected += deriv_term(chart, ExactScalar(1), antiholo(static_cast<int>(l) + 1), order, 1);
      if (!(star.right_op(grad.phibar[l]) == expected)) {
        ok = false;
        why = "R[Φ_" + std::to_string(l + 1) + "bar]";
      }
    }
    if (ok) why = grad.phibar.empty() ? "left operators" : "left and right operators";
    out.push_back({"standard quantization", ok, why});
  }

  {
    auto probes = monomial_probes(chart, std::min(2, st.probe_degree >= 0 ? st.probe_degree : 2));
    bool sep = true, unity = true;
    for (const auto& f : probes) {
      FormalFunc ff(order, f);
      for (int k = 1; k <= chart.n; ++k) {
        FormalFunc a(order, z(k)), b(order, zb(k));
        sep = sep && star.multiply(a, ff) == FormalFunc(order, z(k) * f);
        sep = sep && star.multiply(ff, b) == FormalFunc(order, zb(k) * f);
      }
      FormalFunc one(order, ExactScalar(1));
      unity = unity && star.multiply(one, ff) == ff && star.multiply(ff, one) == ff;
    }
    out.push_back({"separation of variables", sep, std::to_string(probes.size()) + " probes"});
    out.push_back({"unity", unity, std::to_string(probes.size()) + " probes"});
  }
  return out;
}

ExtensionReport check_theorem_ext(const Scenario& sc, const SuiteSettings& st) {
  TheoremInput in;
  in.star = sc.star.get();
  in.data = sc.data;
  in.frame = sc.frame;
  in.frame_ops = sc.frame_ops;
  in.random_triples = std::min(st.random_triples, 4);
  in.seed = st.seed + 1;
  in.max_degree = st.max_degree;
  in.probe_degree = st.probe_degree;
  ExtensionReport rep = check_theorem_ext(in);
  rep.checks.insert(rep.checks.begin(), sc.construction.begin(), sc.construction.end());
  return rep;
}

}  // namespace starext
