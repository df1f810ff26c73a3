#include "starext/starprod/star_product.hpp"

#include <algorithm>

#include "starext/errors.hpp"

namespace starext {

ScalarMatrix invert_matrix(const ScalarMatrix& m) {
  const std::size_t n = m.size();
  ScalarMatrix a = m;
  ScalarMatrix inv(n, std::vector<ExactScalar>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = ExactScalar(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) throw SingularMetric("matrix is singular over the fraction field");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    ExactScalar p = a[col][col].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      if (!a[col][j].is_zero()) a[col][j] *= p;
      if (!inv[col][j].is_zero()) inv[col][j] *= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col].is_zero()) continue;
      ExactScalar f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        if (!a[col][j].is_zero()) a[i][j] -= f * a[col][j];
        if (!inv[col][j].is_zero()) inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

ExactScalar determinant(const ScalarMatrix& m) {
  const std::size_t n = m.size();
  ScalarMatrix a = m;
  ExactScalar det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) return ExactScalar();
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    ExactScalar p = a[col][col].inverse();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a[i][col].is_zero()) continue;
      ExactScalar f = a[i][col] * p;
      for (std::size_t j = col; j < n; ++j)
        if (!a[col][j].is_zero()) a[i][j] -= f * a[col][j];
    }
  }
  return det;
}

PotentialGradient metric_from_gradient(std::vector<ExactScalar> phi, std::vector<ExactScalar> phibar) {
  const int n = static_cast<int>(phi.size());
  if (n < 1 || n > kMaxChartDim) throw PreconditionViolated("chart dimension must be between 1 and 8");
  if (!phibar.empty() && static_cast<int>(phibar.size()) != n)
    throw PreconditionViolated("gradient lists have different lengths");
  PotentialGradient grad;
  grad.chart = Chart{n};
  grad.g.assign(static_cast<std::size_t>(n), std::vector<ExactScalar>(static_cast<std::size_t>(n)));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) grad.g[k][l] = phi[k].derivative(antiholo(l + 1));
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j < n; ++j)
      if (!(phi[k].derivative(holo(j + 1)) == phi[j].derivative(holo(k + 1))))
        throw IntegrabilityError("dPhi_" + std::to_string(k + 1) + "/dz" + std::to_string(j + 1) + " is not symmetric");
  if (!phibar.empty()) {
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        if (!(phibar[l].derivative(holo(k + 1)) == grad.g[k][l]))
          throw IntegrabilityError("dPhi_zb" + std::to_string(l + 1) + "/dz" + std::to_string(k + 1) +
                                   " differs from dPhi_z" + std::to_string(k + 1) + "/dzb" + std::to_string(l + 1));
    for (int l = 0; l < n; ++l)
      for (int m = l + 1; m < n; ++m)
        if (!(phibar[l].derivative(antiholo(m + 1)) == phibar[m].derivative(antiholo(l + 1))))
          throw IntegrabilityError("antiholomorphic gradient is not closed");
  }
  grad.det_g = determinant(grad.g);
  if (grad.det_g.is_zero()) throw SingularMetric("det g vanishes identically");
  grad.ginv = invert_matrix(grad.g);
  grad.phi = std::move(phi);
  grad.phibar = std::move(phibar);
  return grad;
}

StarProduct::StarProduct(PotentialGradient grad, int order) : grad_(std::move(grad)), order_(order) {
  if (order < 0) throw TruncationTooSmall("negative truncation order");
  const int n = grad_.chart.n;
  dg_left_.resize(static_cast<std::size_t>(n));
  dg_right_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      dg_left_[i].push_back(std::make_unique<DerivativeCache>(grad_.g[i][j]));
      dg_right_[i].push_back(std::make_unique<DerivativeCache>(grad_.g[j][i]));
    }
  }
}

FormalOp StarProduct::solve(const FormalFunc& u, bool left) const {
  const Chart chart = grad_.chart;
  const int n = chart.n;
  const int R = std::min(order_, u.order());
  auto family = [&](int i) { return left ? holo(i + 1) : antiholo(i + 1); };
  auto other = [&](int j) { return left ? antiholo(j + 1) : holo(j + 1); };
  // Minv(j, i): inverse of M(i, j) = ∂_{family i} Φ'_j.
  auto minv = [&](int j, int i) -> const ExactScalar& { return left ? grad_.ginv[j][i] : grad_.ginv[i][j]; };
  auto& dg = left ? dg_left_ : dg_right_;
  // ∂^γ Φ'_j for |γ| >= 1 in the derivative family.
  auto dphi = [&](const DerivIndex& gamma, int j) {
    int i = 0;
    while (gamma[family(i)] == 0) ++i;
    std::lock_guard<std::mutex> lock(dg_mutex_);
    return dg[i][j]->get(gamma.lowered(family(i)));
  };
  auto family_index = [&](const DerivIndex& a) {
    for (int i = 0; i < n; ++i)
      if (a[family(i)] != 0) return i;
    return -1;
  };

  std::vector<Var> fam;
  for (int i = 0; i < n; ++i) fam.push_back(family(i));

  FormalOp out(chart, R);
  out[0] = DiffOp::multiplication(chart, u[0]);
  for (int r = 1; r <= R; ++r) {
    const DiffOp& prev = out[r - 1];
    std::map<DerivIndex, ExactScalar> a;
    if (!u[r].is_zero()) a.emplace(DerivIndex(), u[r]);
    for (int m = r - 1; m >= 0; --m) {
      auto betas = indices_of_order(fam, static_cast<unsigned>(m));
      std::vector<std::vector<ExactScalar>> xs;
      xs.reserve(betas.size());
      for (const auto& beta : betas) {
        // w_j = ∂_{other j} a'_β - Σ_{α' > β, |α'| >= m+2} C(α', β) a_{α'} ∂^{α'-β} Φ'_j.
        std::vector<ExactScalar> w(static_cast<std::size_t>(n));
        ExactScalar prev_coeff = prev.coefficient(beta);
        for (int j = 0; j < n; ++j) {
          if (!prev_coeff.is_zero()) w[j] = prev_coeff.derivative(other(j));
          for (const auto& [alpha, ca] : a) {
            if (alpha.order() < static_cast<unsigned>(m + 2) || !alpha.dominates(beta)) continue;
            ExactScalar d = dphi(alpha - beta, j);
            if (d.is_zero()) continue;
            mpz_class binom = multi_binomial(alpha, beta);
            w[j] -= ExactScalar(GaussianRational(mpq_class(binom))) * ca * d;
          }
        }
        std::vector<ExactScalar> x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (!w[j].is_zero() && !minv(j, i).is_zero()) x[i] += w[j] * minv(j, i);
        int first_nonzero = family_index(beta);
        for (int i = 0; i < n; ++i) {
          // Canonical equation for α = β + e_i: i is the first nonzero index of α.
          if (first_nonzero != -1 && first_nonzero < i) continue;
          if (x[i].is_zero()) continue;
          DerivIndex alpha = beta.raised(family(i));
          a[alpha] = ExactScalar(GaussianRational(mpq_class(1, static_cast<long>(beta[family(i)]) + 1))) * x[i];
        }
        xs.push_back(std::move(x));
      }
      // Every equation at this level must hold, not only the canonical ones.
      for (std::size_t b = 0; b < betas.size(); ++b) {
        for (int i = 0; i < n; ++i) {
          DerivIndex alpha = betas[b].raised(family(i));
          auto it = a.find(alpha);
          ExactScalar lhs = it == a.end() ? ExactScalar() : ExactScalar(GaussianRational(static_cast<long>(betas[b][family(i)]) + 1)) * it->second;
          if (!(lhs == xs[b][i]))
            throw IntegrabilityError(std::string(left ? "left" : "right") + " operator system is inconsistent at order " +
                                     std::to_string(r) + ", index " + alpha.to_string());
        }
      }
    }
    DiffOp ar(chart);
    for (const auto& [alpha, c] : a) ar.add_term(alpha, c);
    out[r] = std::move(ar);
  }
  return out;
}

FormalOp StarProduct::plain_op(const ExactScalar& u, bool left) const {
  std::string key = u.to_string();
  auto& cache = left ? left_cache_ : right_cache_;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  FormalOp op = solve(FormalFunc(order_, u), left);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return cache.try_emplace(key, std::move(op)).first->second;
}

namespace {

// Σ_j ν^j D(u_j) from the operators of the plain components.
template <class F>
FormalOp combine(const Chart& chart, int order, const FormalFunc& u, F&& plain) {
  int R = std::min(order, u.order());
  FormalOp out(chart, R);
  for (int j = 0; j <= R; ++j) {
    if (u[j].is_zero()) continue;
    FormalOp op = plain(u[j]);
    for (int r = 0; r + j <= R; ++r) out[r + j] += op[r];
  }
  return out;
}

}  // namespace

FormalOp StarProduct::left_op(const FormalFunc& u) const {
  return combine(chart(), order_, u, [&](const ExactScalar& s) { return plain_op(s, true); });
}

FormalOp StarProduct::left_op(const ExactScalar& u) const { return plain_op(u, true); }

FormalOp StarProduct::right_op(const FormalFunc& b) const {
  return combine(chart(), order_, b, [&](const ExactScalar& s) { return plain_op(s, false); });
}

FormalOp StarProduct::right_op(const ExactScalar& b) const { return plain_op(b, false); }

FormalFunc StarProduct::multiply(const FormalFunc& f, const FormalFunc& g) const { return left_op(f).apply(g); }

FormalFunc StarProduct::multiply(const ExactScalar& f, const ExactScalar& g) const { return left_op(f).apply(g); }

FormalFunc StarProduct::power(const FormalFunc& u, int q) const {
  if (q < 0) throw PreconditionViolated("negative star power; use star_inverse");
  int R = std::min(order_, u.order());
  FormalFunc p(R, ExactScalar(1));
  if (q == 0) return p;
  FormalOp ru = right_op(u);
  for (int k = 0; k < q; ++k) p = ru.apply(p);
  return p;
}

ExactScalar StarProduct::extract_C(int r, const ExactScalar& f, const ExactScalar& g) const {
  if (r < 0 || r > order_) throw TruncationTooSmall("C_" + std::to_string(r) + " is outside the truncation");
  return multiply(f, g)[r];
}

void StarProduct::preload_left(const std::string& key, FormalOp op) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  left_cache_.try_emplace(key, std::move(op));
}

void StarProduct::preload_right(const std::string& key, FormalOp op) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  right_cache_.try_emplace(key, std::move(op));
}

std::map<std::string, FormalOp> StarProduct::cached_left() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return left_cache_;
}

std::map<std::string, FormalOp> StarProduct::cached_right() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return right_cache_;
}

// ---------------------------------------------------------------- Berezin

namespace {

ExactScalar monomial_of(const DerivIndex& idx, const Chart& chart) {
  Monomial m;
  for (Var v : chart_variables(chart))
    if (idx[v] != 0) m = m * Monomial::of(v, idx[v]);
  return ExactScalar(Poly::term(GaussianRational(1), m));
}

std::vector<DerivIndex> indices_up_to(std::span<const Var> vars, int d) {
  std::vector<DerivIndex> out;
  for (int k = 0; k <= d; ++k) {
    auto level = indices_of_order(vars, static_cast<unsigned>(k));
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace

FormalOp berezin_transform(const StarProduct& star, std::optional<int> probe_degree) {
  const Chart chart = star.chart();
  const int R = star.order();
  const int d = probe_degree.value_or(R + 2);
  if (d < R)
    throw Underdetermined("probe degree " + std::to_string(d) + " cannot determine order " + std::to_string(R) +
                          "; raise it to at least " + std::to_string(R));
  auto hol = holomorphic_variables(chart), anti = antiholomorphic_variables(chart);
  auto as = indices_up_to(anti, d), bs = indices_up_to(hol, d);
  // products[(α, β)] = zb^α * z^β.
  std::map<std::pair<DerivIndex, DerivIndex>, FormalFunc> products;
  for (const auto& alpha : as)
    for (const auto& beta : bs)
      products.emplace(std::make_pair(alpha, beta), star.multiply(monomial_of(alpha, chart), monomial_of(beta, chart)));

  FormalOp b = FormalOp::identity(chart, R);
  for (int r = 1; r <= R; ++r) {
    std::vector<std::pair<DerivIndex, DerivIndex>> pairs;
    for (const auto& alpha : indices_up_to(anti, r))
      for (const auto& beta : indices_up_to(hol, r)) pairs.emplace_back(alpha, beta);
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
      return x.first.order() + x.second.order() < y.first.order() + y.second.order();
    });
    DiffOp br(chart);
    for (const auto& [alpha, beta] : pairs) {
      ExactScalar probe = monomial_of(alpha, chart) * monomial_of(beta, chart);
      ExactScalar target = products.at({alpha, beta})[r];
      ExactScalar known = br.apply(probe);
      ExactScalar c = (target - known) / ExactScalar(GaussianRational(mpq_class(alpha.factorial() * beta.factorial())));
      br.add_term(alpha + beta, c);
    }
    b[r] = std::move(br);
  }
  for (const auto& [key, prod] : products) {
    ExactScalar probe = monomial_of(key.first, chart) * monomial_of(key.second, chart);
    FormalFunc image = b.apply(probe);
    for (int r = 0; r <= R; ++r)
      if (!(image[r] == prod[r]))
        throw Underdetermined("Berezin transform does not match the probe zb^" + key.first.to_string() + " z^" +
                              key.second.to_string() + " at order " + std::to_string(r));
  }
  return b;
}

// ---------------------------------------------------------------- inverses, roots

FormalFunc star_inverse(const StarProduct& star, const FormalFunc& u) {
  if (u[0].is_zero()) throw NotUnit("zeroth component vanishes");
  int R = std::min(star.order(), u.order());
  FormalOp ru = star.right_op(u);
  ExactScalar inv0 = u[0].inverse();
  FormalFunc w(R);
  w[0] = inv0;
  for (int l = 1; l <= R; ++l) {
    ExactScalar s;
    for (int i = 1; i <= l; ++i)
      if (!w[l - i].is_zero()) s += ru[i].apply(w[l - i]);
    w[l] = -(s * inv0);
  }
  FormalFunc one(R, ExactScalar(1));
  if (!(star.multiply(u, w) == one) || !(star.multiply(w, u) == one))
    throw PipelineDisagreement("star inverse failed its two-sided check");
  return w;
}

FormalFunc star_root(const StarProduct& star, const FormalFunc& v, int q, const ExactScalar& u0) {
  if (q == 0) throw PreconditionViolated("root index must be nonzero");
  if (u0.is_zero()) throw NotUnit("u0 vanishes");
  if (!(v[0] == u0.pow(q))) throw LeadingMismatch("v0 = " + v[0].to_string() + " is not u0^" + std::to_string(q));
  if (q < 0) return star_root(star, star_inverse(star, v), -q, u0);
  int R = std::min(star.order(), v.order());
  FormalFunc u(R);
  u[0] = u0;
  ExactScalar pivot = (ExactScalar(static_cast<long>(q)) * u0.pow(q - 1)).inverse();
  for (int l = 1; l <= R; ++l) {
    FormalFunc partial = u.truncated(l);
    ExactScalar lower = star.power(partial, q)[l];
    u[l] = (v[l] - lower) * pivot;
  }
  if (!(star.power(u, q) == v.truncated(R))) throw PipelineDisagreement("star root failed its re-powering check");
  return u;
}

// ---------------------------------------------------------------- C3

ScalarMatrix c3_obstruction_coefficients(const PotentialGradient& grad) {
  const int n = grad.chart.n;
  const auto& G = grad.g;
  const auto& H = grad.ginv;
  // dH[a][b][v] = ∂H(a,b)/∂v for v in the chart slots.
  std::vector<std::vector<std::vector<ExactScalar>>> dzb(n, std::vector<std::vector<ExactScalar>>(n)), dz = dzb;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int v = 0; v < n; ++v) {
        dzb[a][b].push_back(H[a][b].derivative(antiholo(v + 1)));
        dz[a][b].push_back(H[a][b].derivative(holo(v + 1)));
      }
  ScalarMatrix out(n, std::vector<ExactScalar>(n));
  // S_{lk} = Σ G(m,n') ∂_{zb q}H(l,s) ∂_{z s}H(n',p) ∂_{zb t}H(q,m) ∂_{z p}H(t,k).
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      ExactScalar sum;
      for (int m = 0; m < n; ++m)
        for (int nn = 0; nn < n; ++nn) {
          if (G[m][nn].is_zero()) continue;
          for (int q = 0; q < n; ++q)
            for (int s = 0; s < n; ++s)
              for (int p = 0; p < n; ++p)
                for (int t = 0; t < n; ++t) {
                  const ExactScalar& f1 = dzb[l][s][q];
                  const ExactScalar& f2 = dz[nn][p][s];
                  const ExactScalar& f3 = dzb[q][m][t];
                  const ExactScalar& f4 = dz[t][k][p];
                  if (f1.is_zero() || f2.is_zero() || f3.is_zero() || f4.is_zero()) continue;
                  sum += G[m][nn] * f1 * f2 * f3 * f4;
                }
        }
      out[l][k] = sum;
    }
  return out;
}

ExactScalar c3_obstruction_S(const PotentialGradient& grad, const ExactScalar& u, const ExactScalar& v) {
  auto s = c3_obstruction_coefficients(grad);
  ExactScalar out;
  for (int l = 0; l < grad.chart.n; ++l)
    for (int k = 0; k < grad.chart.n; ++k)
      if (!s[l][k].is_zero()) out += s[l][k] * u.derivative(antiholo(l + 1)) * v.derivative(holo(k + 1));
  return out;
}

}  // namespace starext
