#include "starext/scalar/poly.hpp"

#include <algorithm>
#include <set>

#include "starext/errors.hpp"

namespace starext {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::of(Var v, unsigned exp) {
  Monomial m;
  if (exp == 0) return m;
  m.exps_.assign(static_cast<std::size_t>(v) + 1, 0);
  m.exps_[v] = static_cast<std::uint16_t>(exp);
  m.degree_ = exp;
  return m;
}

void Monomial::trim() {
  while (!exps_.empty() && exps_.back() == 0) exps_.pop_back();
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  const auto& longer = exps_.size() >= o.exps_.size() ? exps_ : o.exps_;
  const auto& shorter = exps_.size() >= o.exps_.size() ? o.exps_ : exps_;
  r.exps_ = longer;
  for (std::size_t i = 0; i < shorter.size(); ++i) r.exps_[i] = static_cast<std::uint16_t>(r.exps_[i] + shorter[i]);
  r.degree_ = degree_ + o.degree_;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  if (degree_ > o.degree_ || exps_.size() > o.exps_.size()) return false;
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > o.exps_[i]) return false;
  return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
  Monomial r;
  r.exps_ = o.exps_;
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] = static_cast<std::uint16_t>(r.exps_[i] - exps_[i]);
  r.degree_ = o.degree_ - degree_;
  r.trim();
  return r;
}

Monomial Monomial::lowered(Var v) const {
  Monomial r = *this;
  --r.exps_[v];
  --r.degree_;
  r.trim();
  return r;
}

Monomial Monomial::raised(Var v, unsigned by) const {
  if (by == 0) return *this;
  Monomial r = *this;
  if (r.exps_.size() <= v) r.exps_.resize(static_cast<std::size_t>(v) + 1, 0);
  r.exps_[v] = static_cast<std::uint16_t>(r.exps_[v] + by);
  r.degree_ += by;
  return r;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const GaussianRational& c) {
  if (!c.is_zero()) terms_.emplace(Monomial(), c);
}

Poly Poly::variable(Var v) { return term(GaussianRational(1), Monomial::of(v)); }

Poly Poly::term(const GaussianRational& c, const Monomial& m) {
  Poly p;
  if (!c.is_zero()) p.terms_.emplace(m, c);
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

GaussianRational Poly::constant_term() const {
  if (terms_.empty()) return {};
  auto it = terms_.rbegin();
  return it->first.is_one() ? it->second : GaussianRational();
}

unsigned Poly::degree() const { return terms_.empty() ? 0 : terms_.begin()->first.degree(); }

unsigned Poly::degree_in(Var v) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(v));
  return d;
}

bool Poly::uses(Var v) const {
  return std::any_of(terms_.begin(), terms_.end(), [v](const auto& t) { return t.first.exponent(v) > 0; });
}

std::vector<Var> Poly::variables() const {
  std::set<Var> vars;
  for (const auto& [m, c] : terms_) m.for_each([&](Var v, unsigned) { vars.insert(v); });
  return {vars.begin(), vars.end()};
}

void Poly::add_term(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.is_zero() || b.is_zero()) return r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Poly Poly::mul_monomial(const Monomial& m, const GaussianRational& c) const {
  Poly r;
  if (c.is_zero()) return r;
  for (const auto& [mm, cc] : terms_) r.terms_.emplace_hint(r.terms_.end(), mm * m, cc * c);
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly result(1);
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

Poly Poly::derivative(Var v) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    unsigned e = m.exponent(v);
    if (e == 0) continue;
    r.add_term(m.lowered(v), c * GaussianRational(static_cast<long>(e)));
  }
  return r;
}

std::pair<GaussianRational, Poly> Poly::monic() const {
  if (is_zero()) throw DivisionByZero("monic form of the zero polynomial");
  GaussianRational lc = leading_coefficient();
  if (lc.is_one()) return {lc, *this};
  return {lc, *this * lc.inverse()};
}

GaussianRational Poly::evaluate(const std::map<Var, GaussianRational>& point) const {
  GaussianRational sum;
  for (const auto& [m, c] : terms_) {
    GaussianRational t = c;
    m.for_each([&](Var v, unsigned e) {
      auto it = point.find(v);
      if (it == point.end()) throw UnknownVariable("no value for variable " + name_of(v));
      t *= it->second.pow(static_cast<long>(e));
    });
    sum += t;
  }
  return sum;
}

namespace {

std::string monomial_text(const Monomial& m) {
  std::string out;
  m.for_each([&](Var v, unsigned e) {
    if (!out.empty()) out += "*";
    out += name_of(v);
    if (e > 1) out += "^" + std::to_string(e);
  });
  return out;
}

}  // namespace

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c0] : terms_) {
    GaussianRational c = c0;
    bool negative = (c.is_real() && sgn(c.re()) < 0) || (sgn(c.re()) == 0 && sgn(c.im()) < 0);
    if (negative) c = -c;
    out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    first = false;
    if (m.is_one()) {
      out += c.to_string();
    } else if (c.is_one()) {
      out += monomial_text(m);
    } else {
      out += c.to_string() + "*" + monomial_text(m);
    }
  }
  return out;
}

int compare(const Poly& a, const Poly& b) {
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) return grlex_less(ia->first, ib->first) ? -1 : 1;
    auto c = ia->second <=> ib->second;
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (ia == a.terms_.end() && ib == b.terms_.end()) return 0;
  return ia == a.terms_.end() ? -1 : 1;
}

// ---------------------------------------------------------------- division

Reduction reduce_single_divisor(const Poly& p, const Poly& d) {
  if (d.is_zero()) throw DivisionByZero("reduction by the zero polynomial");
  Reduction out;
  Poly work = p;
  const Monomial& lm = d.leading_monomial();
  GaussianRational lc_inv = d.leading_coefficient().inverse();
  while (!work.is_zero()) {
    auto lead = *work.terms().begin();
    if (lm.divides(lead.first)) {
      Monomial q = lm.quotient_of(lead.first);
      GaussianRational c = lead.second * lc_inv;
      out.quotient.add_term(q, c);
      work -= d.mul_monomial(q, c);
    } else {
      out.remainder.add_term(lead.first, lead.second);
      work.add_term(lead.first, -lead.second);
    }
  }
  return out;
}

bool divide_exact(const Poly& p, const Poly& d, Poly& quotient) {
  if (d.is_zero()) throw DivisionByZero("division by the zero polynomial");
  if (p.is_zero()) {
    quotient = Poly();
    return true;
  }
  if (!d.leading_monomial().divides(p.leading_monomial())) return false;
  if (!d.trailing_monomial().divides(p.trailing_monomial())) return false;
  if (d.size() == 1) {
    const auto& [dm, dc] = *d.terms().begin();
    Poly q;
    GaussianRational inv = dc.inverse();
    for (const auto& [m, c] : p.terms()) {
      if (!dm.divides(m)) return false;
      q.add_term(dm.quotient_of(m), c * inv);
    }
    quotient = std::move(q);
    return true;
  }
  // Exact division: stop at the first leading term that is not divisible.
  Poly work = p;
  Poly q;
  const Monomial& lm = d.leading_monomial();
  GaussianRational lc_inv = d.leading_coefficient().inverse();
  while (!work.is_zero()) {
    const auto& lead = *work.terms().begin();
    if (!lm.divides(lead.first)) return false;
    Monomial qm = lm.quotient_of(lead.first);
    GaussianRational c = lead.second * lc_inv;
    q.add_term(qm, c);
    work -= d.mul_monomial(qm, c);
  }
  quotient = std::move(q);
  return true;
}

}  // namespace starext
