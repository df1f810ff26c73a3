#include <doctest.h>

#include <random>

#include "starext/errors.hpp"
#include "starext/extension/extension.hpp"
#include "starext/scalar/parse.hpp"
#include "support/generators.hpp"

using namespace starext;

namespace {

const Chart kOne{1};

Poly circle() { return parse_poly("z1*zb1 - 1"); }

DefiningData circle_data() {
  DefiningData d;
  d.chart = kOne;
  d.psi = circle();
  d.point = {{holo(1), GaussianRational(1)}, {antiholo(1), GaussianRational(1)}};
  return d;
}

std::map<Var, GaussianRational> point(std::initializer_list<std::pair<Var, GaussianRational>> l) {
  return {l.begin(), l.end()};
}

}  // namespace

TEST_CASE("scalar regularity") {
  DefiningData d = circle_data();
  ExactScalar psi(circle());
  SUBCASE("pole of order two") {
    auto v = scalar_extends(z(1) / psi.pow(2), d);
    CHECK_FALSE(v.regular);
    CHECK(v.pole_order == 2);
  }
  SUBCASE("artificial pole cancels") {
    ExactScalar s = ExactScalar::unreduced(circle().pow(2), {DenFactor{std::make_shared<const Poly>(circle()), 1}});
    auto v = scalar_extends(s, d);
    CHECK(v.regular);
    CHECK(v.pole_order == 0);
    CHECK(v.normalized.is_polynomial());
    CHECK(v.normalized == psi);
  }
  SUBCASE("declared unit") {
    CHECK_THROWS_AS(scalar_extends(ExactScalar(1) / zb(1), d), UnrecognizedDenominatorFactor);
    d.declare_unit(Poly::variable(antiholo(1)));
    auto v = scalar_extends(psi / zb(1), d);
    CHECK(v.regular);
    CHECK(v.normalized == psi / zb(1));
  }
  SUBCASE("unit times psi") {
    d.declare_unit(parse_poly("z1*zb1 + 1"));
    ExactScalar w = ExactScalar(1) / ExactScalar(circle() * parse_poly("z1*zb1 + 1"));
    auto v = scalar_extends(w, d);
    CHECK(v.pole_order == 1);
    auto r = scalar_extends(w * psi, d);
    CHECK(r.regular);
  }
  SUBCASE("value preserved on seeded fractions") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 15; ++t) {
      Poly a = testgen::random_poly(rng, 1);
      ExactScalar s = ExactScalar(a) * psi / psi.pow(t % 3);
      auto v = scalar_extends(s, d);
      CHECK(v.normalized == s);
      if (!a.is_zero()) CHECK(v.regular == (t % 3 <= 1));
    }
  }
}

TEST_CASE("operator regularity report") {
  DefiningData d = circle_data();
  ExactScalar psi(circle());
  FormalOp p(kOne, 1);
  p[0] = DiffOp::term(kOne, DerivIndex::of(holo(1)), psi);
  p[1] = DiffOp::multiplication(kOne, z(1) / psi);
  ExtensionReport rep = op_extends(p, d, "P");
  CHECK_FALSE(rep.pass());
  REQUIRE(rep.coefficients.size() == 2);
  CHECK(rep.coefficients[0].regular);
  CHECK(rep.coefficients[0].location == "P ν^0 ∂z1");
  CHECK_FALSE(rep.coefficients[1].regular);
  CHECK(rep.coefficients[1].location == "P ν^1 1");
  CHECK(rep.coefficients[1].pole_order == 1);
  CHECK(rep.to_json()["pass"] == false);
}

TEST_CASE("frame check and bordered Hessian") {
  DefiningData d = circle_data();
  CHECK(frame_check({FormalFunc(1, z(1)), FormalFunc(1, zb(1))}, d));
  CHECK_FALSE(frame_check({FormalFunc(1, z(1)), FormalFunc(1, z(1).pow(2))}, d));
  CHECK_FALSE(frame_check({FormalFunc(1, z(1))}, d));
  ScalarMatrix g = monge_ampere(circle(), kOne, 1);
  CHECK(g[1][1] == ExactScalar(circle()) / ExactScalar(2));
  CHECK(g[0][0] == ExactScalar(1));
}

TEST_CASE("covector and Monge-Ampere criteria") {
  SUBCASE("circle") {
    auto r = covector_gamma_equivalence(circle(), kOne, point({{holo(1), 1}, {antiholo(1), 1}}), 1);
    CHECK(r.frame_independent);
    CHECK(r.gamma_nondegenerate);
    CHECK(r.det_gamma == GaussianRational(-1));
  }
  SUBCASE("line") {
    GaussianRational i = GaussianRational::i();
    auto r = covector_gamma_equivalence(parse_poly("z1 + zb1"), kOne, point({{holo(1), i}, {antiholo(1), -i}}), 1);
    CHECK(r.frame_independent);
    CHECK(r.det_gamma == GaussianRational(-1));
  }
  SUBCASE("pivot vanishes") {
    CHECK_THROWS_AS(covector_gamma_equivalence(parse_poly("(z1 + zb1)^2"), kOne,
                                               point({{holo(1), 0}, {antiholo(1), 0}}), 1),
                    PivotVanishes);
  }
  SUBCASE("degenerate in a second variable") {
    auto r = covector_gamma_equivalence(parse_poly("z1 + zb1"), Chart{2},
                                        point({{holo(1), 1}, {antiholo(1), -1}, {holo(2), 2}, {antiholo(2), 3}}), 1);
    CHECK_FALSE(r.frame_independent);
    CHECK_FALSE(r.gamma_nondegenerate);
  }
}

TEST_CASE("seeded perturbations agree on both criteria") {
  std::mt19937_64 rng(2024);
  const Chart two{2};
  int nondegenerate = 0;
  for (int t = 0; t < 12; ++t) {
    // ψ = z1 + zb1 + q with q linear in zb1, so ψ = 0 is solvable for zb1.
    Poly q = testgen::random_poly(rng, 2, 2, 4);
    Poly fixed;
    for (const auto& [m, c] : q.terms())
      if (m.exponent(antiholo(1)) == 0) fixed.add_term(m, c);
    Poly psi = parse_poly("z1 + zb1") + fixed + parse_poly(t % 2 ? "z2*zb2" : "z2*zb2 + z1*zb2");
    std::uniform_int_distribution<long> v(-3, 3);
    std::map<Var, GaussianRational> x0{{holo(1), GaussianRational(v(rng))},
                                       {holo(2), GaussianRational(v(rng))},
                                       {antiholo(2), GaussianRational(v(rng))},
                                       {antiholo(1), GaussianRational(0)}};
    x0[antiholo(1)] = -psi.evaluate(x0);
    REQUIRE(psi.evaluate(x0).is_zero());
    if (psi.derivative(holo(1)).evaluate(x0).is_zero()) continue;
    auto r = covector_gamma_equivalence(psi, two, x0, 1);
    CHECK(r.frame_independent == r.gamma_nondegenerate);
    if (r.gamma_nondegenerate) ++nondegenerate;
  }
  CHECK(nondegenerate >= 5);
}

TEST_CASE("reconstruction from commutator data") {
  DefiningData d = circle_data();
  ExactScalar psi(circle());
  std::vector<ExactScalar> frame{z(1), zb(1)};
  auto psi_atom = std::make_shared<const Poly>(circle());
  auto artificial = [&](const Poly& num) { return ExactScalar::unreduced(num, {DenFactor{psi_atom, 1}}); };
  DerivIndex dz = DerivIndex::of(holo(1));

  SUBCASE("artificial coefficient") {
    DiffOp a = DiffOp::term(kOne, dz, artificial(circle().pow(2)));
    DiffOp r = reconstruct_extension(a, frame, d);
    CHECK(r == DiffOp::term(kOne, dz, psi));
    CHECK(r.coefficient(dz).is_polynomial());
  }
  SUBCASE("multiplication operator") {
    DiffOp a = DiffOp::multiplication(kOne, artificial(circle().pow(2)));
    CHECK(reconstruct_extension(a, frame, d) == DiffOp::multiplication(kOne, psi));
  }
  SUBCASE("second order") {
    DiffOp a = DiffOp::term(kOne, dz + dz, artificial(circle().pow(2))) +
               DiffOp::term(kOne, dz, artificial(circle() * Poly::variable(holo(1))));
    DiffOp r = reconstruct_extension(a, frame, d);
    CHECK(r == DiffOp::term(kOne, dz + dz, psi) + DiffOp::term(kOne, dz, z(1)));
    CHECK(r == normalize(a, d));
  }
  SUBCASE("seeded operators match direct normalization") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 12; ++t) {
      DiffOp base = testgen::random_op(rng, kOne, 3, 3);
      DiffOp a = base.map_coefficients([&](const DerivIndex&, const ExactScalar& c) {
        return ExactScalar::unreduced((c * psi).num(), {DenFactor{psi_atom, 1}});
      });
      DiffOp r = reconstruct_extension(a, frame, d);
      CHECK(r == normalize(a, d));
      CHECK(r == base);
      for (const auto& [alpha, c] : r.terms()) CHECK(c.is_polynomial());
    }
  }
  SUBCASE("curved frame") {
    d.declare_unit(Poly::variable(antiholo(1)));
    std::vector<ExactScalar> f2{z(1), psi / zb(1)};
    DiffOp a = DiffOp::term(kOne, dz + DerivIndex::of(antiholo(1)), psi) + DiffOp::term(kOne, dz, zb(1));
    CHECK(reconstruct_extension(a, f2, d) == a);
  }
  SUBCASE("genuine pole in a commutator") {
    DiffOp a = DiffOp::term(kOne, dz, z(1) / psi);
    try {
      reconstruct_extension(a, frame, d);
      FAIL("expected a hypothesis failure");
    } catch (const HypothesisFails& e) {
      CHECK(e.location() == "[A, z1]");
    }
  }
  SUBCASE("genuine pole only in A·1") {
    DiffOp a = DiffOp::term(kOne, dz, psi) + DiffOp::multiplication(kOne, ExactScalar(1) / psi);
    try {
      reconstruct_extension(a, frame, d);
      FAIL("expected a hypothesis failure");
    } catch (const HypothesisFails& e) {
      CHECK(e.location() == "A·1");
    }
  }
}

TEST_CASE("probe bases") {
  CHECK(monomial_probes(kOne, 2).size() == 6);
  CHECK(monomial_probes(Chart{2}, 2).size() == 15);
  std::mt19937_64 a(5), b(5);
  CHECK(random_probe(a, kOne, 3) == random_probe(b, kOne, 3));
}
