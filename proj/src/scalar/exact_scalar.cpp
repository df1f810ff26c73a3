#include "starext/scalar/exact_scalar.hpp"

#include <algorithm>

#include "starext/errors.hpp"

namespace starext {
namespace {

bool same_atom(const std::shared_ptr<const Poly>& a, const std::shared_ptr<const Poly>& b) {
  return a == b || compare(*a, *b) == 0;
}

int atom_order(const std::shared_ptr<const Poly>& a, const std::shared_ptr<const Poly>& b) {
  return a == b ? 0 : compare(*a, *b);
}

// Adds `exp` to the exponent of `atom` in a sorted factor list.
void bump(std::vector<DenFactor>& list, const std::shared_ptr<const Poly>& atom, int exp) {
  auto it = std::lower_bound(list.begin(), list.end(), atom,
                             [](const DenFactor& f, const std::shared_ptr<const Poly>& a) { return atom_order(f.atom, a) < 0; });
  if (it != list.end() && same_atom(it->atom, atom)) {
    it->exp += exp;
  } else {
    list.insert(it, DenFactor{atom, exp});
  }
}

Poly expand(const std::vector<DenFactor>& list) {
  Poly p(1);
  for (const auto& f : list) p = p * f.atom->pow(static_cast<unsigned>(f.exp));
  return p;
}

bool same_factors(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].exp != b[i].exp || !same_atom(a[i].atom, b[i].atom)) return false;
  return true;
}

}  // namespace

AtomSplit split_into_atoms(const Poly& p, std::span<const std::shared_ptr<const Poly>> known) {
  if (p.is_zero()) throw DivisionByZero("zero polynomial in a denominator");
  auto [scale, rest] = p.monic();
  AtomSplit out{scale, {}};
  for (const auto& atom : known) {
    if (rest.is_constant()) break;
    Poly q;
    int count = 0;
    while (!rest.is_constant() && divide_exact(rest, *atom, q)) {
      rest = std::move(q);
      ++count;
    }
    if (count > 0) bump(out.factors, atom, count);
  }
  if (!rest.is_constant()) {
    // Quotients of monic polynomials by monic atoms stay monic.
    bump(out.factors, std::make_shared<const Poly>(std::move(rest)), 1);
  } else {
    out.scale *= rest.constant_term();
  }
  return out;
}

ExactScalar ExactScalar::fraction(const Poly& num, const Poly& den) {
  ExactScalar s(num);
  return s.divided_by_poly(den);
}

ExactScalar ExactScalar::unreduced(Poly num, std::vector<DenFactor> den) {
  ExactScalar s;
  s.num_ = std::move(num);
  for (auto& f : den) {
    if (f.exp <= 0) continue;
    auto [scale, monic_atom] = f.atom->monic();
    if (monic_atom.is_constant()) {
      s.num_ *= scale.pow(-f.exp);
      continue;
    }
    s.num_ *= scale.pow(-f.exp);
    bump(s.den_, std::make_shared<const Poly>(std::move(monic_atom)), f.exp);
  }
  return s;
}

Poly ExactScalar::den() const { return expand(den_); }

void ExactScalar::cancel() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& f : den_) {
    Poly q;
    while (f.exp > 0 && divide_exact(num_, *f.atom, q)) {
      num_ = std::move(q);
      --f.exp;
    }
  }
  std::erase_if(den_, [](const DenFactor& f) { return f.exp <= 0; });
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar r = *this;
  r.num_ = -r.num_;
  return r;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  if (o.num_.is_zero()) return *this;
  if (num_.is_zero()) return *this = o;
  if (same_factors(den_, o.den_)) {
    num_ += o.num_;
    cancel();
    return *this;
  }
  std::vector<DenFactor> common = den_;
  for (const auto& f : o.den_) {
    auto it = std::find_if(common.begin(), common.end(), [&](const DenFactor& c) { return same_atom(c.atom, f.atom); });
    if (it == common.end()) {
      bump(common, f.atom, f.exp);
    } else {
      it->exp = std::max(it->exp, f.exp);
    }
  }
  auto cofactor = [&](const std::vector<DenFactor>& own) {
    Poly c(1);
    for (const auto& f : common) {
      int have = 0;
      for (const auto& g : own)
        if (same_atom(g.atom, f.atom)) have = g.exp;
      if (f.exp > have) c = c * f.atom->pow(static_cast<unsigned>(f.exp - have));
    }
    return c;
  };
  num_ = num_ * cofactor(den_) + o.num_ * cofactor(o.den_);
  den_ = std::move(common);
  cancel();
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) { return *this += -o; }

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
  if (num_.is_zero() || o.num_.is_zero()) {
    *this = ExactScalar();
    return *this;
  }
  num_ = num_ * o.num_;
  for (const auto& f : o.den_) bump(den_, f.atom, f.exp);
  if (!den_.empty()) cancel();
  return *this;
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
  if (o.is_zero()) throw DivisionByZero("division by zero scalar");
  if (o.den_.empty() && o.num_.is_constant()) {
    num_ *= o.num_.constant_term().inverse();
    return *this;
  }
  std::vector<std::shared_ptr<const Poly>> hints;
  for (const auto& f : den_) hints.push_back(f.atom);
  for (const auto& f : o.den_) hints.push_back(f.atom);
  ExactScalar inv;
  inv.num_ = o.den();
  AtomSplit split = split_into_atoms(o.num_, hints);
  inv.num_ *= split.scale.inverse();
  inv.den_ = std::move(split.factors);
  inv.cancel();
  return *this *= inv;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  if (a.same_representation(b)) return true;
  return (a - b).is_zero();
}

bool ExactScalar::same_representation(const ExactScalar& o) const {
  return num_ == o.num_ && same_factors(den_, o.den_);
}

ExactScalar ExactScalar::inverse() const { return ExactScalar(1) / *this; }

ExactScalar ExactScalar::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  ExactScalar r;
  r.num_ = num_.pow(static_cast<unsigned>(e));
  for (const auto& f : den_) r.den_.push_back(DenFactor{f.atom, f.exp * e});
  if (e == 0) r.den_.clear();
  return r;
}

ExactScalar ExactScalar::derivative(Var v) const {
  if (den_.empty()) return ExactScalar(num_.derivative(v));
  // d(N / Π a^e) = (N' Π_S a - N Σ_S e a' Π_{S\a} b) / (Π a^e · Π_S a),
  // S = atoms that depend on v.
  std::vector<std::size_t> dependent;
  for (std::size_t i = 0; i < den_.size(); ++i)
    if (den_[i].atom->uses(v)) dependent.push_back(i);
  if (dependent.empty()) {
    ExactScalar r = *this;
    r.num_ = num_.derivative(v);
    r.cancel();
    return r;
  }
  Poly prod_all(1);
  for (std::size_t i : dependent) prod_all = prod_all * *den_[i].atom;
  Poly numerator = num_.derivative(v) * prod_all;
  for (std::size_t i : dependent) {
    Poly others(1);
    for (std::size_t j : dependent)
      if (j != i) others = others * *den_[j].atom;
    numerator -= num_ * (den_[i].atom->derivative(v) * others) * GaussianRational(static_cast<long>(den_[i].exp));
  }
  ExactScalar r;
  r.num_ = std::move(numerator);
  r.den_ = den_;
  for (std::size_t i : dependent) r.den_[i].exp += 1;
  r.cancel();
  return r;
}

GaussianRational ExactScalar::evaluate(const std::map<Var, GaussianRational>& point) const {
  GaussianRational d(1);
  for (const auto& f : den_) {
    GaussianRational a = f.atom->evaluate(point);
    if (a.is_zero()) throw DenominatorVanishes("denominator factor " + f.atom->to_string() + " vanishes at the point");
    d *= a.pow(f.exp);
  }
  return num_.evaluate(point) / d;
}

std::string ExactScalar::to_string() const {
  if (den_.empty()) return num_.to_string();
  std::string out = "(" + num_.to_string() + ")/";
  auto factor_text = [](const DenFactor& f) {
    std::string t = "(" + f.atom->to_string() + ")";
    if (f.exp > 1) t += "^" + std::to_string(f.exp);
    return t;
  };
  if (den_.size() == 1 && den_[0].exp == 1) return out + factor_text(den_[0]);
  out += "(";
  for (std::size_t i = 0; i < den_.size(); ++i) {
    if (i > 0) out += "*";
    out += factor_text(den_[i]);
  }
  return out + ")";
}

ExactScalar ExactScalar::divided_by_poly(const Poly& p, std::span<const std::shared_ptr<const Poly>> hints) const {
  std::vector<std::shared_ptr<const Poly>> known(hints.begin(), hints.end());
  for (const auto& f : den_) known.push_back(f.atom);
  AtomSplit split = split_into_atoms(p, known);
  ExactScalar r;
  r.num_ = num_ * split.scale.inverse();
  r.den_ = den_;
  for (const auto& f : split.factors) bump(r.den_, f.atom, f.exp);
  r.cancel();
  return r;
}

}  // namespace starext
