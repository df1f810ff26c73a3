#include "starext/abstract/aop.hpp"

#include <algorithm>

#include "starext/errors.hpp"
#include "starext/scalar/parse.hpp"

namespace starext {

namespace {

const char* const kMiddleDot = "\xC2\xB7";
const char* const kMinus = "\xE2\x88\x92";

// Highest t-index reachable before the variable table runs out.
void check_generator(int k) {
  if (k > kMaxGenerator)
    throw SizeLimit("t" + std::to_string(k) + " exceeds the generator table (max t" + std::to_string(kMaxGenerator) + ")");
}

}  // namespace

AOp::AOp(const Poly& p) { add_term(0, p); }

AOp AOp::delta(unsigned power) { return term(Poly(1), power); }

AOp AOp::term(const Poly& p, unsigned delta_power) {
  AOp a;
  a.add_term(delta_power, p);
  return a;
}

Poly AOp::coefficient(unsigned j) const {
  auto it = terms_.find(j);
  return it == terms_.end() ? Poly() : it->second;
}

void AOp::add_term(unsigned j, const Poly& p) {
  if (p.is_zero()) return;
  for (Var v : p.variables())
    if (kind_of(v) != VarKind::AlgebraGenerator) throw UnknownVariable("non-generator variable " + name_of(v) + " in an AOp");
  auto [it, inserted] = terms_.try_emplace(j, p);
  if (inserted) return;
  it->second += p;
  if (it->second.is_zero()) terms_.erase(it);
}

AOp AOp::operator-() const {
  AOp r = *this;
  for (auto& [j, p] : r.terms_) p = -p;
  return r;
}

AOp& AOp::operator+=(const AOp& o) {
  for (const auto& [j, p] : o.terms_) add_term(j, p);
  return *this;
}

AOp& AOp::operator-=(const AOp& o) {
  for (const auto& [j, p] : o.terms_) add_term(j, -p);
  return *this;
}

AOp operator*(const Poly& p, const AOp& a) {
  AOp r;
  if (p.is_zero()) return r;
  for (const auto& [j, q] : a.terms_) r.add_term(j, p * q);
  return r;
}

namespace {

std::string monomial_text(const Monomial& m) {
  std::string out;
  m.for_each([&](Var v, unsigned e) {
    if (!out.empty()) out += kMiddleDot;
    out += name_of(v);
    if (e > 1) out += "^" + std::to_string(e);
  });
  return out;
}

}  // namespace

std::string AOp::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    unsigned j = it->first;
    std::string dpart;
    if (j > 0) dpart = j == 1 ? "\xCE\xB4" : "\xCE\xB4^" + std::to_string(j);
    for (const auto& [m, c] : it->second.terms()) {
      std::string body = monomial_text(m);
      if (!dpart.empty()) body = body.empty() ? dpart : body + kMiddleDot + dpart;
      bool negative = c.is_real() && sgn(c.re()) < 0;
      GaussianRational mag = negative ? -c : c;
      std::string coeff;
      if (!mag.is_one() || body.empty()) {
        coeff = mag.to_string();
        if (!mag.prints_atomic() && coeff.front() != '(') coeff = "(" + coeff + ")";
      }
      std::string piece = coeff.empty() ? body : (body.empty() ? coeff : coeff + kMiddleDot + body);
      if (out.empty()) {
        out = negative ? std::string(kMinus) + piece : piece;
      } else {
        out += negative ? std::string(" ") + kMinus + " " : " + ";
        out += piece;
      }
    }
  }
  return out;
}

Poly delta_of(const Poly& p) {
  Poly out;
  for (Var v : p.variables()) {
    int k = index_of(v);
    check_generator(k + 1);
    out += p.derivative(v) * Poly::variable(generator(k + 1));
  }
  return out;
}

AOp compose_A(const AOp& x, const AOp& y) {
  AOp out;
  for (const auto& [j, p] : x.terms()) {
    for (const auto& [k, q] : y.terms()) {
      // p δ^j ∘ q δ^k = Σ_i C(j,i) p δ^i(q) δ^{j-i+k}.
      Poly d = q;
      mpz_class binom = 1;
      for (unsigned i = 0; i <= j && !d.is_zero(); ++i) {
        out.add_term(j - i + k, p * d * GaussianRational(mpq_class(binom)));
        binom = binom * (j - i) / (i + 1);
        if (i < j) d = delta_of(d);
      }
    }
  }
  return out;
}

AOp commutator_A(const AOp& x, const AOp& y) { return compose_A(x, y) - compose_A(y, x); }

AOp power_A(const AOp& x, unsigned k) {
  AOp r(Poly(1));
  for (unsigned i = 0; i < k; ++i) r = compose_A(r, x);
  return r;
}

std::string Bidegree::to_string() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::NotHomogeneous: return "not homogeneous";
    default: return "(" + std::to_string(first) + ", " + std::to_string(second) + ")";
  }
}

Bidegree bidegree(const AOp& x) {
  Bidegree b;
  for (const auto& [j, p] : x.terms()) {
    for (const auto& [m, c] : p.terms()) {
      int d1 = 0, d2 = static_cast<int>(j);
      m.for_each([&](Var v, unsigned e) {
        d1 += static_cast<int>(e);
        d2 += index_of(v) * static_cast<int>(e);
      });
      if (b.kind == Bidegree::Kind::Zero) {
        b = {Bidegree::Kind::Homogeneous, d1, d2};
      } else if (b.first != d1 || b.second != d2) {
        return {Bidegree::Kind::NotHomogeneous, 0, 0};
      }
    }
  }
  return b;
}

bool operator==(const FormalAOp& a, const FormalAOp& b) {
  int r = std::min(a.order(), b.order());
  for (int k = 0; k <= r; ++k)
    if (!(a[k] == b[k])) return false;
  return true;
}

std::string FormalAOp::to_string() const {
  std::string out;
  for (int r = 0; r <= order(); ++r) {
    if (comps_[r].is_zero()) continue;
    std::string body = comps_[r].to_string();
    if (r == 0) {
      out = body;
      continue;
    }
    if (!out.empty()) out += " + ";
    out += (r == 1 ? std::string("\xCE\xBD") : "\xCE\xBD^" + std::to_string(r)) + "(" + body + ")";
  }
  return out.empty() ? "0" : out;
}

FormalAOp compose_A(const FormalAOp& x, const FormalAOp& y) {
  int R = std::min(x.order(), y.order());
  FormalAOp out(R);
  for (int i = 0; i <= R; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; i + j <= R; ++j)
      if (!y[j].is_zero()) out[i + j] += compose_A(x[i], y[j]);
  }
  return out;
}

FormalAOp power_A(const FormalAOp& x, unsigned k) {
  FormalAOp r(x.order());
  r[0] = AOp(Poly(1));
  for (unsigned i = 0; i < k; ++i) r = compose_A(r, x);
  return r;
}

namespace {

Poly t0_power(unsigned e) { return Poly::term(GaussianRational(1), Monomial::of(generator(0), e)); }

}  // namespace

AOp division_operator(const AOp& a, int n) {
  AOp out;
  for (int i = 0; i <= n; ++i)
    out += t0_power(static_cast<unsigned>(n - i)) * compose_A(a, AOp(t0_power(static_cast<unsigned>(i))));
  return out;
}

AOp op_divide(const AOp& b, int r, int n) {
  if (n < 1) throw PreconditionViolated("N must be positive");
  if (r < 0) throw PreconditionViolated("order bound must be nonnegative");
  if (static_cast<int>(b.order()) > r && !b.is_zero())
    throw OrderExceeds("operator of order " + std::to_string(b.order()) + " exceeds the bound " + std::to_string(r));
  // Descent: A = c Σ_ρ t0^{Nρ} B_ρ, c = 1/(N+1), B_{ρ-1} = t0^N B_ρ - c Σ_i t0^{N-i} B_ρ ∘ t0^i.
  const GaussianRational c(mpq_class(1, n + 1));
  AOp a;
  AOp cur = b;
  for (int rho = r; rho >= 0 && !cur.is_zero(); --rho) {
    a += (t0_power(static_cast<unsigned>(n * rho)) * c) * cur;
    AOp next = t0_power(static_cast<unsigned>(n)) * cur - Poly(c) * division_operator(cur, n);
    if (!next.is_zero() && static_cast<int>(next.order()) >= rho)
      throw InternalDivisibilityFailure(rho, "descent step did not lower the order");
    cur = std::move(next);
  }
  if (!cur.is_zero()) throw InternalDivisibilityFailure(0, "descent left a nonzero remainder");
  return a;
}

FormalAOp build_S(int n, int order) {
  if (n < 1) throw PreconditionViolated("N must be positive");
  FormalAOp s(order);
  AOp step = AOp::term(t0_power(static_cast<unsigned>(n + 1)), 1);
  AOp cur(t0_power(static_cast<unsigned>(n + 1)));
  for (int k = 0; k <= order; ++k) {
    s[k] = cur;
    if (k < order) cur = compose_A(step, cur);
  }
  return s;
}

bool left_divide_t0(const AOp& x, unsigned m, AOp& quotient) {
  AOp q;
  const Var t0 = generator(0);
  for (const auto& [j, p] : x.terms()) {
    Poly qp;
    for (const auto& [mono, c] : p.terms()) {
      if (mono.exponent(t0) < m) return false;
      Monomial lowered = mono;
      for (unsigned i = 0; i < m; ++i) lowered = lowered.lowered(t0);
      qp.add_term(lowered, c);
    }
    q.add_term(j, qp);
  }
  quotient = std::move(q);
  return true;
}

FormalAOp op_root(int n, int order) {
  if (n < 1) throw PreconditionViolated("N must be positive");
  FormalAOp s = build_S(n, order);
  FormalAOp a(order);
  a[0] = AOp::t(0);
  for (int r = 1; r <= order; ++r) {
    // With A_r = 0 the ν^r part of A^{N+1} depends only on A_0..A_{r-1}.
    FormalAOp partial(r);
    for (int i = 0; i < r; ++i) partial[i] = a[i];
    AOp rhs = s[r] - power_A(partial, static_cast<unsigned>(n + 1))[r];
    AOp b;
    if (!left_divide_t0(rhs, static_cast<unsigned>(n * (r + 1)), b))
      throw InternalDivisibilityFailure(r, "right-hand side " + rhs.to_string() + " is not divisible by t0^" +
                                               std::to_string(n * (r + 1)));
    if (!b.is_zero() && static_cast<int>(b.order()) > r)
      throw InternalDivisibilityFailure(r, "right-hand side has order " + std::to_string(b.order()));
    a[r] = op_divide(b, r, n);
  }
  return a;
}

DiffOp tau_evaluate(const AOp& x, const ExactScalar& f, const DiffOp& v) {
  const Chart chart = v.chart();
  for (const auto& [alpha, c] : v.terms())
    if (alpha.order() != 1)
      throw NotVectorField("τ(δ) must be a first-order operator without zero-order term, got " + v.to_string());
  std::vector<ExactScalar> images{f};
  auto image = [&](int k) -> const ExactScalar& {
    while (static_cast<int>(images.size()) <= k) images.push_back(v.apply(images.back()));
    return images[static_cast<std::size_t>(k)];
  };
  std::vector<DiffOp> vpow{DiffOp::identity(chart)};
  DiffOp out(chart);
  for (const auto& [j, p] : x.terms()) {
    while (vpow.size() <= j) vpow.push_back(compose(vpow.back(), v));
    ExactScalar coeff;
    for (const auto& [m, c] : p.terms()) {
      ExactScalar t(c);
      m.for_each([&](Var var, unsigned e) { t *= image(index_of(var)).pow(static_cast<int>(e)); });
      coeff += t;
    }
    out += coeff * vpow[j];
  }
  return out;
}

FormalOp tau_evaluate(const FormalAOp& x, const ExactScalar& f, const DiffOp& v) {
  FormalOp out(v.chart(), x.order());
  for (int r = 0; r <= x.order(); ++r) out[r] = tau_evaluate(x[r], f, v);
  return out;
}

EqualRootsReport verify_equal_roots(const FormalOp& a, const FormalOp& b, int n) {
  require_same_chart(a.chart(), b.chart());
  if (!a[0].is_multiplication() || a[0].is_zero())
    throw PreconditionViolated("zeroth component of A is not multiplication by a unit");
  if (!(a[0] == b[0])) throw PreconditionViolated("zeroth components differ");
  EqualRootsReport rep;
  rep.powers_equal = power(a, static_cast<unsigned>(n + 1)) == power(b, static_cast<unsigned>(n + 1));
  int R = std::min(a.order(), b.order());
  rep.components_equal = true;
  for (int r = 0; r <= R; ++r) {
    if (!(a[r] == b[r])) {
      rep.components_equal = false;
      rep.first_difference = r;
      break;
    }
  }
  return rep;
}

namespace {

struct AOpAlgebra {
  using Value = AOp;
  Value number(const mpz_class& n) { return AOp(Poly(GaussianRational(mpq_class(n)))); }
  Value identifier(const std::string& name, std::size_t col) {
    if (name == "\xCE\xB4" || name == "delta" || name == "d") return AOp::delta();
    if (name == "i") return AOp(Poly(GaussianRational::i()));
    Var v = 0;
    if (!lookup_variable(name, v, false) || kind_of(v) != VarKind::AlgebraGenerator)
      throw ParseError(col, "unknown generator '" + name + "'");
    return AOp(Poly::variable(v));
  }
  Value group(Value v) { return v; }
  Value add(Value a, Value b) { return a + b; }
  Value sub(Value a, Value b) { return a - b; }
  Value neg(Value a) { return -a; }
  Value mul(Value a, Value b) { return compose_A(a, b); }
  Value div(Value a, Value b, std::size_t col) {
    if (b.order() != 0 || !b.coefficient(0).is_constant() || b.is_zero())
      throw ParseError(col, "division only by nonzero constants");
    return Poly(b.coefficient(0).constant_term().inverse()) * a;
  }
  Value pow(Value a, long e, std::size_t col) {
    if (e < 0) throw ParseError(col, "negative powers are not allowed here");
    return power_A(a, static_cast<unsigned>(e));
  }
};

}  // namespace

AOp parse_aop(std::string_view text) {
  AOpAlgebra alg;
  ExprParser<AOpAlgebra> parser(text, alg);
  return parser.parse();
}

nlohmann::json to_json(const AOp& x, int nu_power) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [j, p] : x.terms()) terms.push_back({{"delta_power", j}, {"coeff_text", p.to_string()}});
  return {{"nu_power", nu_power}, {"terms", terms}};
}

nlohmann::json to_json(const FormalAOp& x) {
  nlohmann::json out = nlohmann::json::array();
  for (int r = 0; r <= x.order(); ++r)
    if (!x[r].is_zero()) out.push_back(to_json(x[r], r));
  return out;
}

}  // namespace starext
