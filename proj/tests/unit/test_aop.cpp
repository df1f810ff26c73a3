#include <doctest.h>

#include <random>

#include "starext/abstract/aop.hpp"
#include "starext/errors.hpp"
#include "starext/scalar/parse.hpp"
#include "support/generators.hpp"

using namespace starext;

namespace {

AOp t(int k) { return AOp::t(k); }
AOp d() { return AOp::delta(); }
AOp c(long num, long den = 1) { return AOp(Poly(GaussianRational::rational(num, den))); }
AOp t0p(unsigned e) { return power_A(t(0), e); }
AOp operator*(const AOp& a, const AOp& b) { return compose_A(a, b); }

}  // namespace

TEST_CASE("normal ordering") {
  CHECK(d() * t(0) == t(0) * d() + t(1));
  CHECK(t0p(2) * d() * t0p(2) == t0p(4) * d() + c(2) * t0p(3) * t(1));
  CHECK(commutator_A(t(0), t(1)).is_zero());
  CHECK(parse_aop("t0^2*δ*t0^2") == t0p(4) * d() + c(2) * t0p(3) * t(1));
  CHECK(parse_aop("δ^2") == AOp::delta(2));
}

TEST_CASE("display text") {
  CHECK((c(1, 2) * t(0) * d() - c(1, 4) * t(1)).to_string() == "1/2\xC2\xB7t0\xC2\xB7\xCE\xB4 \xE2\x88\x92 1/4\xC2\xB7t1");
  CHECK(parse_aop((c(1, 2) * t0p(3) * d() + c(3, 4) * t0p(2) * t(1)).to_string()) ==
        c(1, 2) * t0p(3) * d() + c(3, 4) * t0p(2) * t(1));
  CHECK(c(-1).to_string() == "\xE2\x88\x92" "1");
}

TEST_CASE("associativity of composition") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    AOp x = testgen::random_aop(rng), y = testgen::random_aop(rng), z = testgen::random_aop(rng);
    CHECK((x * y) * z == x * (y * z));
  }
}

TEST_CASE("bidegrees") {
  CHECK(bidegree(t0p(3) * d()).is(3, 1));
  for (int n = 1; n <= 3; ++n) {
    auto b = bidegree(t0p(n + 1) * d() * t0p(n + 1));
    CHECK(b.kind == Bidegree::Kind::Homogeneous);
    CHECK(b.is(2 * n + 2, 1));
  }
  CHECK_FALSE(bidegree(t(0) + d()).homogeneous());
}

TEST_CASE("division equation") {
  CHECK(op_divide(c(1, 2) * t(1), 0, 1) == c(1, 4) * t(1));
  CHECK(op_divide(t(1), 0, 2) == c(1, 3) * t(1));
  AOp a = op_divide(d(), 1, 1);
  CHECK(a == c(1, 2) * t(0) * d() - c(1, 4) * t(1));
  CHECK(division_operator(a, 1) == t0p(2) * d());
  CHECK_THROWS_AS(op_divide(AOp::delta(2), 1, 1), OrderExceeds);

  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 3; ++n) {
    for (int r = 0; r <= 3; ++r) {
      for (int trial = 0; trial < 4; ++trial) {
        int q = 1 + trial % 3;
        AOp b = testgen::random_homogeneous_aop(rng, q, r);
        if (b.is_zero()) continue;
        AOp x = op_divide(b, r, n);
        CHECK(division_operator(x, n) == t0p(static_cast<unsigned>(n * (r + 1))) * b);
        CHECK(x.order() <= static_cast<unsigned>(r));
        CHECK(bidegree(x).is(n * r + q, r));
        // Perturbing the solution breaks the identity.
        AOp y = x + t(0) * AOp::delta(static_cast<unsigned>(r));
        CHECK_FALSE(division_operator(y, n) == t0p(static_cast<unsigned>(n * (r + 1))) * b);
      }
    }
  }
}

TEST_CASE("S series") {
  for (int n = 1; n <= 3; ++n) {
    FormalAOp s = build_S(n, 3);
    CHECK(s[0] == t0p(static_cast<unsigned>(n + 1)));
    for (int k = 0; k <= 3; ++k) CHECK(bidegree(s[k]).is((n + 1) * (k + 1), k));
  }
  CHECK(build_S(1, 1)[1] == t0p(4) * d() + c(2) * t0p(3) * t(1));
}

TEST_CASE("roots") {
  CHECK(op_root(1, 0).to_string() == "t0");
  FormalAOp a = op_root(1, 1);
  CHECK(a[1] == c(1, 2) * t0p(3) * d() + c(3, 4) * t0p(2) * t(1));
  CHECK(a.to_string() == "t0 + \xCE\xBD(1/2\xC2\xB7t0^3\xC2\xB7\xCE\xB4 + 3/4\xC2\xB7t0^2\xC2\xB7t1)");
  for (int n = 1; n <= 3; ++n) {
    FormalAOp root = op_root(n, 4);
    CHECK(power_A(root, static_cast<unsigned>(n + 1)) == build_S(n, 4));
    for (int r = 0; r <= 4; ++r) CHECK(bidegree(root[r]).is((n + 1) * r + 1, r));
    AOp a1 = c(1, n + 1) * t0p(static_cast<unsigned>(n + 2)) * d() +
             c(n + 2, 2 * (n + 1)) * t0p(static_cast<unsigned>(n + 1)) * t(1);
    CHECK(root[1] == a1);
  }
}

TEST_CASE("tau homomorphism") {
  Chart ch{1};
  ExactScalar psi = parse_scalar("z1 + zb1");
  DiffOp v = -DiffOp::derivative(ch, holo(1));
  CHECK(tau_evaluate(t(1), psi, v) == DiffOp::multiplication(ch, ExactScalar(-1)));
  CHECK(tau_evaluate(d() * t(0), psi, v) == compose(v, DiffOp::multiplication(ch, psi)));
  CHECK(tau_evaluate(t(0), z(1), v) == DiffOp::multiplication(ch, z(1)));
  CHECK_THROWS_AS(tau_evaluate(t(0), z(1), DiffOp::identity(ch)), NotVectorField);

  std::mt19937_64 rng(77);
  ExactScalar f = parse_scalar("z1^2*zb1 + 3*z1");
  DiffOp w = DiffOp::term(ch, DerivIndex::of(holo(1)), zb(1)) + DiffOp::derivative(ch, antiholo(1));
  for (int trial = 0; trial < 10; ++trial) {
    AOp x = testgen::random_aop(rng), y = testgen::random_aop(rng);
    CHECK(tau_evaluate(x * y, f, w) == compose(tau_evaluate(x, f, w), tau_evaluate(y, f, w)));
  }
}

TEST_CASE("equal roots") {
  Chart ch{1};
  ExactScalar f = parse_scalar("z1 + zb1");
  DiffOp v = -DiffOp::derivative(ch, holo(1));
  FormalOp a = tau_evaluate(op_root(1, 2), f, v);
  CHECK(bool(verify_equal_roots(a, a, 1)));
  FormalOp b = a;
  b[1] = b[1] + DiffOp::multiplication(ch, f);
  auto rep = verify_equal_roots(a, b, 1);
  CHECK_FALSE(rep.powers_equal);
  CHECK_FALSE(rep.components_equal);
  CHECK(rep.first_difference == 1);
  FormalOp c0 = a;
  c0[0] = DiffOp::multiplication(ch, ExactScalar(2));
  CHECK_THROWS_AS(verify_equal_roots(a, c0, 1), PreconditionViolated);
}
