#include <doctest.h>

#include <random>

#include "starext/errors.hpp"
#include "starext/scalar/parse.hpp"
#include "starext/starprod/star_product.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace starext;

namespace {

const Chart kOne{1};

StarProduct flat(int n, int order) {
  std::vector<ExactScalar> phi, phibar;
  for (int k = 1; k <= n; ++k) {
    phi.push_back(zb(k));
    phibar.push_back(z(k));
  }
  return StarProduct(metric_from_gradient(phi, phibar), order);
}

// Φ = log|ψ| with ψ = z + zb.
StarProduct log_line(int order) {
  ExactScalar psi = z(1) + zb(1);
  return StarProduct(metric_from_gradient({psi.inverse()}, {psi.inverse()}), order);
}

// Φ = log|zz̄ - 1|.
StarProduct log_circle(int order) {
  ExactScalar psi = z(1) * zb(1) - ExactScalar(1);
  return StarProduct(metric_from_gradient({zb(1) / psi}, {z(1) / psi}), order);
}

DiffOp dz() { return DiffOp::derivative(kOne, holo(1)); }
DiffOp mul(const ExactScalar& s) { return DiffOp::multiplication(kOne, s); }

}  // namespace

TEST_CASE("metrics from gradients") {
  auto g = metric_from_gradient({zb(1)}, {z(1)});
  CHECK(g.g[0][0] == ExactScalar(1));
  CHECK(g.ginv[0][0] == ExactScalar(1));
  ExactScalar psi = z(1) + zb(1);
  auto lg = metric_from_gradient({psi.inverse()}, {});
  CHECK(lg.g[0][0] == -psi.pow(-2));
  CHECK(lg.ginv[0][0] == -psi.pow(2));
  CHECK_THROWS_AS(metric_from_gradient({zb(1)}, {ExactScalar(2) * z(1)}), IntegrabilityError);
  CHECK_THROWS_AS(metric_from_gradient({z(1)}, {}), SingularMetric);
}

TEST_CASE("left operators") {
  StarProduct f = flat(1, 3);
  FormalOp l = f.left_op(zb(1));
  CHECK(l == FormalOp::single(mul(zb(1)), 3) + FormalOp::single(dz(), 3, 1));
  FormalFunc p = f.multiply(zb(1), z(1));
  CHECK(p.to_string() == "z1*zb1 + \xCE\xBD(1)");

  // Grassmannian p = r = 1: Φ_z = -zb/(1 - z zb).
  ExactScalar w = ExactScalar(1) - z(1) * zb(1);
  StarProduct gr(metric_from_gradient({-zb(1) / w}, {-z(1) / w}), 2);
  FormalOp lz = gr.left_op(zb(1));
  CHECK(lz[1] == DiffOp::term(kOne, DerivIndex::of(holo(1)), -w.pow(2)));
}

TEST_CASE("standard quantization and separation on curved charts") {
  for (int which = 0; which < 2; ++which) {
    StarProduct s = which == 0 ? log_line(3) : log_circle(3);
    const auto& grad = s.gradient();
    CHECK(s.left_op(grad.phi[0]) == FormalOp::single(mul(grad.phi[0]), 3) + FormalOp::single(dz(), 3, 1));
    CHECK(s.right_op(grad.phibar[0]) ==
          FormalOp::single(mul(grad.phibar[0]), 3) + FormalOp::single(DiffOp::derivative(kOne, antiholo(1)), 3, 1));
    ExactScalar a = z(1) * z(1), b = zb(1) * zb(1) + zb(1);
    std::mt19937_64 rng(5 + which);
    for (int t = 0; t < 3; ++t) {
      ExactScalar f = ExactScalar(testgen::random_poly(rng, 1));
      CHECK(s.multiply(a, f) == FormalFunc(3, a * f));
      CHECK(s.multiply(f, b) == FormalFunc(3, b * f));
      CHECK(s.multiply(ExactScalar(1), f) == FormalFunc(3, f));
      CHECK(s.multiply(f, ExactScalar(1)) == FormalFunc(3, f));
      ExactScalar g = ExactScalar(testgen::random_poly(rng, 1));
      ExactScalar lhs = s.extract_C(1, f, g) - s.extract_C(1, g, f);
      ExactScalar rhs = grad.ginv[0][0] * (f.derivative(antiholo(1)) * g.derivative(holo(1)) -
                                           g.derivative(antiholo(1)) * f.derivative(holo(1)));
      CHECK(lhs == rhs);
      CHECK(s.extract_C(0, f, g) == f * g);
    }
  }
}

TEST_CASE("flat chart matches the Wick closed form") {
  StarProduct f1 = flat(1, 4);
  for (unsigned a = 0; a <= 3; ++a)
    for (unsigned b = 0; b <= 3; ++b)
      for (unsigned c = 0; c <= 3; ++c)
        for (unsigned d = 0; d <= 3; ++d) {
          if (a + b > 6 || c + d > 6) continue;
          ExactScalar f = z(1).pow(static_cast<int>(a)) * zb(1).pow(static_cast<int>(b));
          ExactScalar g = z(1).pow(static_cast<int>(c)) * zb(1).pow(static_cast<int>(d));
          FormalFunc p = f1.multiply(f, g);
          for (int r = 0; r <= 4; ++r) CHECK(p[r] == oracle::wick_C(r, f, g, 1));
        }
  StarProduct f2 = flat(2, 2);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    ExactScalar f = ExactScalar(testgen::random_poly(rng, 2, 3, 3)), g = ExactScalar(testgen::random_poly(rng, 2, 3, 3));
    FormalFunc p = f2.multiply(f, g);
    for (int r = 0; r <= 2; ++r) CHECK(p[r] == oracle::wick_C(r, f, g, 2));
  }
}

TEST_CASE("associativity on curved charts") {
  std::mt19937_64 rng(31);
  for (int which = 0; which < 2; ++which) {
    StarProduct s = which == 0 ? log_line(3) : log_circle(3);
    for (int t = 0; t < 4; ++t) {
      FormalFunc f(3, ExactScalar(testgen::random_poly(rng, 1))), g(3, ExactScalar(testgen::random_poly(rng, 1))),
          h(3, ExactScalar(testgen::random_poly(rng, 1)));
      CHECK(s.multiply(s.multiply(f, g), h) == s.multiply(f, s.multiply(g, h)));
      FormalOp lf = s.left_op(f), rg = s.right_op(g);
      CHECK(commutator(lf, rg) == FormalOp(kOne, 3));
    }
  }
}

TEST_CASE("Berezin transform") {
  StarProduct f = flat(1, 2);
  FormalOp b = berezin_transform(f);
  CHECK(b[1] == compose(DiffOp::derivative(kOne, antiholo(1)), dz()));
  CHECK(b.apply(z(1) * zb(1)) == FormalFunc({z(1) * zb(1), ExactScalar(1), ExactScalar()}));
  StarProduct c = log_line(2);
  FormalOp bc = berezin_transform(c);
  CHECK(bc.apply(ExactScalar(1)) == FormalFunc(2, ExactScalar(1)));
  CHECK(bc[1] == c.gradient().ginv[0][0] * compose(DiffOp::derivative(kOne, antiholo(1)), dz()));
  CHECK_THROWS_AS(berezin_transform(c, 1), Underdetermined);
}

TEST_CASE("star inverse and roots") {
  StarProduct f = flat(1, 3);
  ExactScalar u0 = ExactScalar(1) - z(1) * zb(1);
  FormalFunc w = star_inverse(f, FormalFunc(3, u0));
  CHECK(w[0] == u0.inverse());
  CHECK(w[1] == z(1) * zb(1) * u0.pow(-3));
  CHECK(star_inverse(f, FormalFunc(3, ExactScalar(1))) == FormalFunc(3, ExactScalar(1)));
  FormalFunc nz(3);
  nz[1] = z(1);
  CHECK_THROWS_AS(star_inverse(f, nz), NotUnit);
  CHECK(star_inverse(f, w) == FormalFunc(3, u0));

  CHECK(star_root(f, w, -1, u0) == FormalFunc(3, u0));
  CHECK_THROWS_AS(star_root(f, w, -1, ExactScalar(1) + z(1) * zb(1)), LeadingMismatch);
  FormalFunc v(3, parse_scalar("z1^2 + zb1 + 2"));
  CHECK(star_root(f, v, 1, v[0]) == v);

  for (int which = 0; which < 2; ++which) {
    StarProduct s = which == 0 ? flat(1, 3) : log_circle(3);
    ExactScalar base = which == 0 ? u0 : z(1) * zb(1) + ExactScalar(2);
    for (int q : {2, -1, -3}) {
      FormalFunc target(3, base.pow(q));
      target[1] = z(1) * zb(1);
      FormalFunc u = star_root(s, target, q, base);
      FormalFunc back = q > 0 ? s.power(u, q) : star_inverse(s, s.power(u, -q));
      CHECK(back == target);
    }
  }
}

TEST_CASE("C3 obstruction") {
  StarProduct f = flat(2, 1);
  CHECK(c3_obstruction_S(f.gradient(), parse_scalar("z1*zb2 + zb1^2"), parse_scalar("z2^3*zb1")).is_zero());
  ExactScalar psi = z(1) * zb(1) - ExactScalar(1);
  auto grad = metric_from_gradient({zb(1) / psi}, {z(1) / psi});
  auto s = c3_obstruction_coefficients(grad);
  ExactScalar psi_z = psi.derivative(holo(1)), psi_zb = psi.derivative(antiholo(1));
  CHECK(s[0][0] == ExactScalar(-16) * psi.pow(2) * psi_z.pow(2) * psi_zb.pow(2));
  CHECK(s[0][0].is_polynomial());
}
