#include "starext/diffop/diffop.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "starext/errors.hpp"

namespace starext {

void require_same_chart(const Chart& a, const Chart& b) {
  if (!(a == b))
    throw ChartMismatch("operands live on charts of dimension " + std::to_string(a.n) + " and " +
                        std::to_string(b.n));
}

// ---------------------------------------------------------------- DerivIndex

DerivIndex DerivIndex::of(Var v, unsigned count) {
  if (v >= kSlots) throw UnknownVariable("derivative in a non-chart variable " + name_of(v));
  DerivIndex d;
  d.slots_[v] = static_cast<std::uint8_t>(count);
  return d;
}

DerivIndex DerivIndex::holomorphic(std::span<const int> alpha) {
  DerivIndex d;
  for (std::size_t k = 0; k < alpha.size(); ++k) d.slots_[holo(static_cast<int>(k) + 1)] = static_cast<std::uint8_t>(alpha[k]);
  return d;
}

DerivIndex DerivIndex::antiholomorphic(std::span<const int> beta) {
  DerivIndex d;
  for (std::size_t k = 0; k < beta.size(); ++k)
    d.slots_[antiholo(static_cast<int>(k) + 1)] = static_cast<std::uint8_t>(beta[k]);
  return d;
}

unsigned DerivIndex::order() const {
  unsigned s = 0;
  for (auto c : slots_) s += c;
  return s;
}

unsigned DerivIndex::holomorphic_order() const {
  unsigned s = 0;
  for (int v = 0; v < kSlots; v += 2) s += slots_[v];
  return s;
}

unsigned DerivIndex::antiholomorphic_order() const { return order() - holomorphic_order(); }

std::vector<int> DerivIndex::dz(int n) const {
  std::vector<int> out;
  for (int k = 1; k <= n; ++k) out.push_back(slots_[holo(k)]);
  return out;
}

std::vector<int> DerivIndex::dzbar(int n) const {
  std::vector<int> out;
  for (int k = 1; k <= n; ++k) out.push_back(slots_[antiholo(k)]);
  return out;
}

DerivIndex DerivIndex::operator+(const DerivIndex& o) const {
  DerivIndex r;
  for (int v = 0; v < kSlots; ++v) r.slots_[v] = static_cast<std::uint8_t>(slots_[v] + o.slots_[v]);
  return r;
}

DerivIndex DerivIndex::operator-(const DerivIndex& o) const {
  DerivIndex r;
  for (int v = 0; v < kSlots; ++v) r.slots_[v] = static_cast<std::uint8_t>(slots_[v] - o.slots_[v]);
  return r;
}

bool DerivIndex::dominates(const DerivIndex& o) const {
  for (int v = 0; v < kSlots; ++v)
    if (slots_[v] < o.slots_[v]) return false;
  return true;
}

DerivIndex DerivIndex::raised(Var v, unsigned by) const {
  DerivIndex r = *this;
  r.slots_[v] = static_cast<std::uint8_t>(r.slots_[v] + by);
  return r;
}

DerivIndex DerivIndex::lowered(Var v) const {
  DerivIndex r = *this;
  --r.slots_[v];
  return r;
}

int DerivIndex::first_slot() const {
  for (int v = 0; v < kSlots; ++v)
    if (slots_[v] != 0) return v;
  return -1;
}

mpz_class DerivIndex::factorial() const {
  mpz_class f = 1;
  for (auto c : slots_) {
    mpz_class t;
    mpz_fac_ui(t.get_mpz_t(), c);
    f *= t;
  }
  return f;
}

std::string DerivIndex::to_string() const {
  std::string out;
  for (int v = 0; v < kSlots; ++v) {
    if (slots_[v] == 0) continue;
    if (!out.empty()) out += "*";
    out += "\xE2\x88\x82" + name_of(static_cast<Var>(v));
    if (slots_[v] > 1) out += "^" + std::to_string(slots_[v]);
  }
  return out;
}

mpz_class multi_binomial(const DerivIndex& alpha, const DerivIndex& gamma) {
  mpz_class r = 1;
  for (int v = 0; v < DerivIndex::kSlots; ++v) {
    unsigned a = alpha[static_cast<Var>(v)], g = gamma[static_cast<Var>(v)];
    if (g == 0) continue;
    mpz_class t;
    mpz_bin_uiui(t.get_mpz_t(), a, g);
    r *= t;
  }
  return r;
}

std::vector<DerivIndex> sub_indices(const DerivIndex& alpha) {
  std::vector<DerivIndex> out{DerivIndex()};
  for (int v = 0; v < DerivIndex::kSlots; ++v) {
    unsigned a = alpha[static_cast<Var>(v)];
    if (a == 0) continue;
    std::size_t size = out.size();
    for (std::size_t i = 0; i < size; ++i)
      for (unsigned c = 1; c <= a; ++c) out.push_back(out[i].raised(static_cast<Var>(v), c));
  }
  return out;
}

std::vector<DerivIndex> indices_of_order(std::span<const Var> vars, unsigned k) {
  std::vector<DerivIndex> out;
  std::function<void(std::size_t, unsigned, DerivIndex)> rec = [&](std::size_t i, unsigned left, DerivIndex cur) {
    if (i + 1 == vars.size()) {
      out.push_back(cur.raised(vars[i], left));
      return;
    }
    for (unsigned c = 0; c <= left; ++c) rec(i + 1, left - c, cur.raised(vars[i], c));
  };
  if (vars.empty()) {
    if (k == 0) out.emplace_back();
    return out;
  }
  rec(0, k, DerivIndex());
  return out;
}

const ExactScalar& DerivativeCache::get(const DerivIndex& alpha) {
  auto it = table_.find(alpha);
  if (it != table_.end()) return it->second;
  int v = alpha.first_slot();
  const ExactScalar& lower = get(alpha.lowered(static_cast<Var>(v)));
  ExactScalar d = lower.derivative(static_cast<Var>(v));
  return table_.emplace(alpha, std::move(d)).first->second;
}

ExactScalar partial(const ExactScalar& s, const DerivIndex& alpha) {
  ExactScalar r = s;
  for (int v = 0; v < DerivIndex::kSlots && !r.is_zero(); ++v)
    for (unsigned c = 0; c < alpha[static_cast<Var>(v)] && !r.is_zero(); ++c) r = r.derivative(static_cast<Var>(v));
  return r;
}

// ---------------------------------------------------------------- DiffOp

DiffOp DiffOp::multiplication(Chart chart, const ExactScalar& s) { return term(chart, DerivIndex(), s); }

DiffOp DiffOp::term(Chart chart, const DerivIndex& alpha, const ExactScalar& s) {
  DiffOp d(chart);
  d.add_term(alpha, s);
  return d;
}

unsigned DiffOp::order() const {
  unsigned r = 0;
  for (const auto& [alpha, c] : terms_) r = std::max(r, alpha.order());
  return r;
}

ExactScalar DiffOp::coefficient(const DerivIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? ExactScalar() : it->second;
}

bool DiffOp::is_multiplication() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
}

bool DiffOp::only_holomorphic() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.antiholomorphic_order() == 0; });
}

bool DiffOp::only_antiholomorphic() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.holomorphic_order() == 0; });
}

void DiffOp::add_term(const DerivIndex& alpha, const ExactScalar& s) {
  if (s.is_zero()) return;
  for (int v = 2 * chart_.n; v < DerivIndex::kSlots; ++v)
    if (alpha[static_cast<Var>(v)] != 0)
      throw ChartMismatch("derivative " + alpha.to_string() + " outside a chart of dimension " + std::to_string(chart_.n));
  auto [it, inserted] = terms_.try_emplace(alpha, s);
  if (inserted) return;
  it->second += s;
  if (it->second.is_zero()) terms_.erase(it);
}

DiffOp DiffOp::operator-() const {
  DiffOp r = *this;
  for (auto& [alpha, c] : r.terms_) c = -c;
  return r;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  require_same_chart(chart_, o.chart_);
  for (const auto& [alpha, c] : o.terms_) add_term(alpha, c);
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  require_same_chart(chart_, o.chart_);
  for (const auto& [alpha, c] : o.terms_) add_term(alpha, -c);
  return *this;
}

DiffOp operator*(const ExactScalar& s, const DiffOp& a) {
  DiffOp r(a.chart_);
  if (s.is_zero()) return r;
  for (const auto& [alpha, c] : a.terms_) r.add_term(alpha, s * c);
  return r;
}

bool operator==(const DiffOp& a, const DiffOp& b) {
  if (!(a.chart_ == b.chart_)) return false;
  DiffOp d = a - b;
  return d.is_zero();
}

ExactScalar DiffOp::apply(const ExactScalar& f) const {
  DerivativeCache cache(f);
  ExactScalar out;
  for (const auto& [alpha, c] : terms_) {
    const ExactScalar& df = cache.get(alpha);
    if (!df.is_zero()) out += c * df;
  }
  return out;
}

DiffOp DiffOp::top_part(unsigned r) const {
  DiffOp out(chart_);
  for (const auto& [alpha, c] : terms_)
    if (alpha.order() == r) out.add_term(alpha, c);
  return out;
}

namespace {

std::string coefficient_factor(const ExactScalar& c) {
  std::string t = c.to_string();
  if (c.is_polynomial() && c.num().size() == 1) {
    const auto& [m, k] = *c.num().terms().begin();
    if (m.is_one() || k.is_one() || k.prints_atomic()) return t;
  }
  return "(" + t + ")";
}

}  // namespace

std::string DiffOp::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest order first, then by index.
  std::vector<const TermMap::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return a->first.order() > b->first.order(); });
  for (auto* t : order) {
    const auto& [alpha, c] = *t;
    std::string piece;
    if (alpha.is_zero()) {
      piece = c.to_string();
      if (!c.is_polynomial() || c.num().size() > 1) piece = "(" + piece + ")";
    } else if (c.is_one()) {
      piece = alpha.to_string();
    } else if (c == ExactScalar(-1)) {
      piece = "-" + alpha.to_string();
    } else {
      piece = coefficient_factor(c) + "*" + alpha.to_string();
    }
    if (out.empty()) {
      out = piece;
    } else if (piece.starts_with("-")) {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  return out;
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
  require_same_chart(a.chart(), b.chart());
  DiffOp out(a.chart());
  if (a.is_zero() || b.is_zero()) return out;
  std::vector<std::pair<DerivIndex, DerivativeCache>> caches;
  caches.reserve(b.terms().size());
  for (const auto& [beta, c] : b.terms()) caches.emplace_back(beta, DerivativeCache(c));
  // ∂^α ∘ (c ∂^β) = Σ_γ C(α,γ) (∂^γ c) ∂^{α-γ+β}.
  for (const auto& [alpha, ca] : a.terms()) {
    auto gammas = sub_indices(alpha);
    for (auto& [beta, cache] : caches) {
      for (const auto& gamma : gammas) {
        const ExactScalar& dc = cache.get(gamma);
        if (dc.is_zero()) continue;
        ExactScalar coeff = ca * dc;
        mpz_class binom = multi_binomial(alpha, gamma);
        if (binom != 1) coeff = ExactScalar(GaussianRational(mpq_class(binom))) * coeff;
        out.add_term(alpha - gamma + beta, coeff);
      }
    }
  }
  return out;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return compose(a, b) - compose(b, a); }

DiffOp power(const DiffOp& a, unsigned k) {
  DiffOp r = DiffOp::identity(a.chart());
  for (unsigned i = 0; i < k; ++i) r = compose(r, a);
  return r;
}

// ---------------------------------------------------------------- FormalFunc

FormalFunc::FormalFunc(int order, const ExactScalar& f0) : comps_(static_cast<std::size_t>(order) + 1) { comps_[0] = f0; }

FormalFunc FormalFunc::truncated(int order) const {
  if (order > this->order())
    throw TruncationTooSmall("cannot extend a series of order " + std::to_string(this->order()) + " to " +
                             std::to_string(order));
  return FormalFunc(std::vector<ExactScalar>(comps_.begin(), comps_.begin() + order + 1));
}

FormalFunc& FormalFunc::operator+=(const FormalFunc& o) {
  if (o.order() < order()) comps_.resize(o.comps_.size());
  for (int r = 0; r <= order(); ++r) comps_[r] += o.comps_[r];
  return *this;
}

FormalFunc& FormalFunc::operator-=(const FormalFunc& o) {
  if (o.order() < order()) comps_.resize(o.comps_.size());
  for (int r = 0; r <= order(); ++r) comps_[r] -= o.comps_[r];
  return *this;
}

FormalFunc operator*(const ExactScalar& s, FormalFunc f) {
  for (auto& c : f.comps_) c = s * c;
  return f;
}

bool operator==(const FormalFunc& a, const FormalFunc& b) {
  int r = std::min(a.order(), b.order());
  for (int k = 0; k <= r; ++k)
    if (!(a.comps_[k] == b.comps_[k])) return false;
  return true;
}

namespace {

template <class T>
std::string series_text(const std::vector<T>& comps) {
  std::string out;
  for (std::size_t r = 0; r < comps.size(); ++r) {
    if (comps[r].is_zero()) continue;
    std::string body = comps[r].to_string();
    if (r == 0) {
      out = body;
      continue;
    }
    std::string nu = r == 1 ? "\xCE\xBD" : "\xCE\xBD^" + std::to_string(r);
    if (!out.empty()) out += " + ";
    out += nu + "(" + body + ")";
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string FormalFunc::to_string() const { return series_text(comps_); }

// ---------------------------------------------------------------- FormalOp

FormalOp::FormalOp(Chart chart, int order) : chart_(chart), comps_(static_cast<std::size_t>(order) + 1, DiffOp(chart)) {
  if (order < 0) throw TruncationTooSmall("negative truncation order");
}

FormalOp FormalOp::identity(Chart chart, int order) {
  FormalOp r(chart, order);
  r.comps_[0] = DiffOp::identity(chart);
  return r;
}

FormalOp FormalOp::single(const DiffOp& d, int order, int power) {
  FormalOp r(d.chart(), order);
  if (power <= order) r.comps_[power] = d;
  return r;
}

FormalOp FormalOp::truncated(int order) const {
  if (order > this->order())
    throw TruncationTooSmall("cannot extend an operator of order " + std::to_string(this->order()) + " to " +
                             std::to_string(order));
  FormalOp r(chart_, order);
  for (int k = 0; k <= order; ++k) r.comps_[k] = comps_[k];
  return r;
}

FormalOp FormalOp::operator-() const {
  FormalOp r = *this;
  for (auto& d : r.comps_) d = -d;
  return r;
}

FormalOp& FormalOp::operator+=(const FormalOp& o) {
  require_same_chart(chart_, o.chart_);
  if (o.order() < order()) comps_.resize(o.comps_.size());
  for (int r = 0; r <= order(); ++r) comps_[r] += o.comps_[r];
  return *this;
}

FormalOp& FormalOp::operator-=(const FormalOp& o) {
  require_same_chart(chart_, o.chart_);
  if (o.order() < order()) comps_.resize(o.comps_.size());
  for (int r = 0; r <= order(); ++r) comps_[r] -= o.comps_[r];
  return *this;
}

FormalOp operator*(const ExactScalar& s, const FormalOp& a) {
  FormalOp r = a;
  for (auto& d : r.comps_) d = s * d;
  return r;
}

bool operator==(const FormalOp& a, const FormalOp& b) {
  if (!(a.chart_ == b.chart_)) return false;
  int r = std::min(a.order(), b.order());
  for (int k = 0; k <= r; ++k)
    if (!(a.comps_[k] == b.comps_[k])) return false;
  return true;
}

FormalFunc FormalOp::apply(const FormalFunc& f) const {
  int R = std::min(order(), f.order());
  FormalFunc out(R);
  for (int i = 0; i <= R; ++i) {
    if (comps_[i].is_zero()) continue;
    for (int j = 0; i + j <= R; ++j)
      if (!f[j].is_zero()) out[i + j] += comps_[i].apply(f[j]);
  }
  return out;
}

FormalFunc FormalOp::apply(const ExactScalar& f) const { return apply(FormalFunc(order(), f)); }

std::string FormalOp::to_string() const { return series_text(comps_); }

FormalOp compose(const FormalOp& a, const FormalOp& b) {
  require_same_chart(a.chart(), b.chart());
  int R = std::min(a.order(), b.order());
  FormalOp out(a.chart(), R);
  for (int i = 0; i <= R; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= R; ++j)
      if (!b[j].is_zero()) out[i + j] += compose(a[i], b[j]);
  }
  return out;
}

FormalOp commutator(const FormalOp& a, const FormalOp& b) { return compose(a, b) - compose(b, a); }

FormalOp power(const FormalOp& a, unsigned k) {
  FormalOp r = FormalOp::identity(a.chart(), a.order());
  for (unsigned i = 0; i < k; ++i) r = compose(r, a);
  return r;
}

FormalOp invert_formal(const FormalOp& p) {
  const DiffOp& p0 = p[0];
  if (p0.is_zero()) throw NotInvertible("zeroth component vanishes");
  if (!p0.is_multiplication()) throw NotInvertible("zeroth component " + p0.to_string() + " is not a multiplication operator");
  ExactScalar c = p0.coefficient(DerivIndex());
  ExactScalar cinv = c.inverse();
  int R = p.order();
  // P = c (1 + E) with E = O(ν); (1 + E)^{-1} = Σ_k (-E)^k by Horner.
  FormalOp e = cinv * p;
  e[0] = DiffOp(p.chart());
  FormalOp neg_e = -e;
  FormalOp s = FormalOp::identity(p.chart(), R);
  for (int k = 0; k < R; ++k) s = FormalOp::identity(p.chart(), R) + compose(neg_e, s);
  return compose(s, FormalOp::single(DiffOp::multiplication(p.chart(), cinv), R));
}

// ---------------------------------------------------------------- symbols

std::vector<Var> chart_variables(const Chart& chart) {
  std::vector<Var> out;
  for (int k = 1; k <= chart.n; ++k) {
    out.push_back(holo(k));
    out.push_back(antiholo(k));
  }
  return out;
}

std::vector<Var> holomorphic_variables(const Chart& chart) {
  std::vector<Var> out;
  for (int k = 1; k <= chart.n; ++k) out.push_back(holo(k));
  return out;
}

std::vector<Var> antiholomorphic_variables(const Chart& chart) {
  std::vector<Var> out;
  for (int k = 1; k <= chart.n; ++k) out.push_back(antiholo(k));
  return out;
}

Covector differential(const ExactScalar& f, const Chart& chart) {
  Covector c;
  for (Var v : chart_variables(chart)) c.push_back(f.derivative(v));
  return c;
}

ExactScalar SymmetricForm::coefficient(const DerivIndex& alpha) const {
  auto it = coeffs_.find(alpha);
  return it == coeffs_.end() ? ExactScalar() : it->second;
}

ExactScalar SymmetricForm::evaluate(std::span<const Covector> covectors) const {
  if (covectors.size() != order_)
    throw PreconditionViolated("symbol of order " + std::to_string(order_) + " evaluated on " +
                               std::to_string(covectors.size()) + " covectors");
  const std::size_t slots = static_cast<std::size_t>(2 * chart_.n);
  for (const auto& c : covectors)
    if (c.size() != slots) throw ChartMismatch("covector has the wrong number of components");
  mpz_class rfact;
  mpz_fac_ui(rfact.get_mpz_t(), order_);
  // T_{i_1..i_r} = a_α α!/r!, α the multiplicity vector of (i_1..i_r).
  ExactScalar total;
  std::vector<std::size_t> idx(order_, 0);
  for (;;) {
    DerivIndex alpha;
    for (auto i : idx) alpha = alpha.raised(static_cast<Var>(i));
    auto it = coeffs_.find(alpha);
    if (it != coeffs_.end()) {
      ExactScalar prod = it->second;
      for (std::size_t m = 0; m < order_ && !prod.is_zero(); ++m) prod *= covectors[m][idx[m]];
      if (!prod.is_zero())
        total += ExactScalar(GaussianRational(mpq_class(alpha.factorial(), rfact))) * prod;
    }
    std::size_t m = 0;
    while (m < order_ && ++idx[m] == slots) idx[m++] = 0;
    if (m == order_) break;
  }
  return total;
}

ExactScalar SymmetricForm::as_polynomial() const {
  ExactScalar out;
  for (const auto& [alpha, c] : coeffs_) {
    Monomial m;
    for (int k = 1; k <= chart_.n; ++k) {
      if (unsigned e = alpha[holo(k)]) m = m * Monomial::of(auxiliary("xi" + std::to_string(k)), e);
      if (unsigned e = alpha[antiholo(k)]) m = m * Monomial::of(auxiliary("eta" + std::to_string(k)), e);
    }
    out += c * ExactScalar(Poly::term(GaussianRational(1), m));
  }
  return out;
}

SymmetricForm polarized_principal_symbol(const DiffOp& a, unsigned r) {
  if (a.order() > r)
    throw OrderExceeds("operator of order " + std::to_string(a.order()) + " exceeds " + std::to_string(r));
  std::map<DerivIndex, ExactScalar> top;
  for (const auto& [alpha, c] : a.terms())
    if (alpha.order() == r) top.emplace(alpha, c);
  return SymmetricForm(a.chart(), r, std::move(top));
}

DiffOp nested_commutator(const DiffOp& a, std::span<const ExactScalar> functions) {
  DiffOp r = a;
  for (const auto& f : functions) r = commutator(r, DiffOp::multiplication(a.chart(), f));
  return r;
}

}  // namespace starext
