#include "starext/scalar/parse.hpp"

#include <vector>

namespace starext {
namespace {

// Values remember their top-level factorization (product of powers) so that
// "x/((a)^2*(b))" records a and b as separate denominator atoms, which is
// what the printer emits.
struct FactoredValue {
  ExactScalar value;
  std::vector<std::pair<ExactScalar, long>> factors;
};

struct ScalarAlgebra {
  using Value = FactoredValue;
  bool intern_aux = false;

  static Value atom(ExactScalar s) {
    Value v{s, {}};
    v.factors.emplace_back(std::move(s), 1);
    return v;
  }

  Value number(const mpz_class& n) { return atom(ExactScalar(GaussianRational(mpq_class(n)))); }

  Value identifier(const std::string& name, std::size_t col) {
    if (name == "i") return atom(ExactScalar(GaussianRational::i()));
    Var v = 0;
    if (!lookup_variable(name, v, intern_aux)) throw ParseError(col, "unknown variable '" + name + "'");
    return atom(ExactScalar::variable(v));
  }

  Value group(Value v) { return v; }
  Value add(Value a, Value b) { return atom(a.value + b.value); }
  Value sub(Value a, Value b) { return atom(a.value - b.value); }

  Value neg(Value a) {
    a.value = -a.value;
    a.factors.emplace_back(ExactScalar(-1), 1);
    return a;
  }

  Value mul(Value a, Value b) {
    a.value *= b.value;
    for (auto& f : b.factors) a.factors.push_back(std::move(f));
    return a;
  }

  Value div(Value a, Value b, std::size_t col) {
    if (b.value.is_zero()) throw ParseError(col, "division by zero");
    for (const auto& [f, e] : b.factors) {
      for (long k = 0; k < (e < 0 ? -e : e); ++k) {
        if (e > 0) {
          a.value /= f;
        } else {
          a.value *= f;
        }
      }
      a.factors.emplace_back(f, -e);
    }
    return a;
  }

  Value pow(Value a, long e, std::size_t col) {
    if (e < 0 && a.value.is_zero()) throw ParseError(col, "negative power of zero");
    Value r{a.value.pow(static_cast<int>(e)), {}};
    for (auto& [f, k] : a.factors) r.factors.emplace_back(std::move(f), k * e);
    return r;
  }
};

}  // namespace

ExactScalar parse_scalar(std::string_view text, bool intern_aux) {
  ScalarAlgebra alg;
  alg.intern_aux = intern_aux;
  ExprParser<ScalarAlgebra> parser(text, alg);
  return parser.parse().value;
}

Poly parse_poly(std::string_view text, bool intern_aux) {
  ExactScalar s = parse_scalar(text, intern_aux);
  if (!s.is_polynomial()) throw ParseError(0, "expected a polynomial, got " + s.to_string());
  return s.num();
}

}  // namespace starext
