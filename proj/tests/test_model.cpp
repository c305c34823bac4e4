// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "symref/model.hpp"

using namespace symref;
using testfix::Rng;
using testfix::demo_linear;
using testfix::perm_set;
using testfix::random_signed_perm;

TEST_CASE("signed permutation basics") {
  SignedPermutation g({-2, -1});  // g(1) = -2, g(2) = -1
  CHECK(g.n() == 2);
  CHECK(g(1) == -2);
  CHECK(g(-1) == 2);
  CHECK(g(2) == -1);
  CHECK(g(-2) == 1);
  CHECK(g.cycles() == "(1,-2)(2,-1)");
  CHECK(g.is_involution());
  CHECK_FALSE(g.is_unsigned());
  CHECK(g.support() == std::vector<int>{1, 2});
  CHECK(g.inverse() == g);
  CHECK(compose(g, g).is_identity());

  SignedPermutation id = SignedPermutation::identity(3);
  CHECK(id.is_identity());
  CHECK(id.is_unsigned());
  CHECK(id.cycles() == "()");
  CHECK(id.support().empty());
}

TEST_CASE("two_cycles only for unsigned involutions") {
  SignedPermutation swap12({2, 1, 3});
  auto tc = swap12.two_cycles();
  REQUIRE(tc.has_value());
  REQUIRE(tc->size() == 1);
  CHECK((*tc)[0] == std::pair<int, int>{1, 2});

  CHECK_FALSE(SignedPermutation({-1, 2}).two_cycles().has_value());
  CHECK_FALSE(SignedPermutation({2, 3, 1}).two_cycles().has_value());
}

TEST_CASE("compose applies right factor first") {
  // g1 = (1,2) swap, g2 = (1,-1) flip: (g2 o g1)(2) = g2(1) = -1.
  SignedPermutation g1({2, 1});
  SignedPermutation g2({-1, 2});
  SignedPermutation c = compose(g2, g1);
  CHECK(c(2) == -1);
  CHECK(c(1) == 2);
}

TEST_CASE("reflection permutes around centers") {
  // A 7-point involution (1,3)(4,6) with zero centers swaps entries.
  std::vector<int> img{3, 2, 1, 6, 5, 4, 7};
  SignedPermutation g(img);
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
  std::vector<double> xi(7, 0.0);
  CHECK(apply_reflection(x, g, xi) == std::vector<double>{3, 2, 1, 6, 5, 4, 7});
}

TEST_CASE("reflection uses the inverse image and center offsets") {
  // g(1) = -2: coordinate 2 of the image reads coordinate 1 mirrored.
  SignedPermutation g({-2, -1});
  std::vector<double> xi{0.0, 0.0};
  std::vector<double> x{0.25, -0.75};
  std::vector<double> y = apply_reflection(x, g, xi);
  CHECK(y[0] == doctest::Approx(0.75));
  CHECK(y[1] == doctest::Approx(-0.25));

  // Nonzero centers shift before negating: x' = xi + sign * (x - xi).
  std::vector<double> xi2{2.0, -1.0};
  SignedPermutation flip({-1, 2});
  std::vector<double> z = apply_reflection({2.5, 0.0}, flip, xi2);
  CHECK(z[0] == doctest::Approx(1.5));
  CHECK(z[1] == doctest::Approx(0.0));
}

TEST_CASE("group action axioms on random data") {
  Rng rng(7);
  for (int it = 0; it < 200; ++it) {
    int n = 2 + rng.uniform(4);
    SignedPermutation g1 = random_signed_perm(rng, n);
    SignedPermutation g2 = random_signed_perm(rng, n);
    std::vector<double> x(n), xi(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.real(-3.0, 3.0);
      xi[i] = rng.real(-1.0, 1.0);
    }
    std::vector<double> lhs = apply_reflection(x, compose(g2, g1), xi);
    std::vector<double> rhs = apply_reflection(apply_reflection(x, g1, xi), g2, xi);
    for (int i = 0; i < n; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    std::vector<double> fixed =
        apply_reflection(x, SignedPermutation::identity(n), xi);
    for (int i = 0; i < n; ++i) CHECK(fixed[i] == doctest::Approx(x[i]).epsilon(1e-12));
  }
}

TEST_CASE("centers are midpoints of two-sided or free domains") {
  Minlp p;
  p.vars.push_back({"a", -1.0, 1.0, false, 0.0});
  p.vars.push_back({"b", 1.0, 3.0, false, 0.0});
  p.vars.push_back({"c", -2.0, 0.0, false, 0.0});
  p.vars.push_back({"d", 0.0, kInf, false, 0.0});
  p.vars.push_back({"e", -kInf, kInf, false, 0.0});
  Centers c = compute_centers(p);
  CHECK(c.xi == std::vector<double>{0.0, 2.0, -1.0, 0.0, 0.0});
  CHECK(c.reflectable[0]);
  CHECK(c.reflectable[1]);
  CHECK(c.reflectable[2]);
  CHECK_FALSE(c.reflectable[3]);
  CHECK(c.reflectable[4]);
}

TEST_CASE("variable types match across the demo reflection") {
  Minlp p = demo_linear();
  Centers c = compute_centers(p);
  // All four domains are symmetric around their centers with equal radius 1.
  VariableType t1 = variable_type(p, c, 1);
  CHECK(t1 == variable_type(p, c, 3));
  CHECK(t1 == variable_type(p, c, -2));
  CHECK(t1.rel_lb == doctest::Approx(-1.0));
  CHECK(t1.rel_ub == doctest::Approx(1.0));

  VariableType asym{-0.25, 1.0, 2.0, false};
  VariableType neg = asym.negated();
  CHECK(neg.rel_lb == doctest::Approx(-1.0));
  CHECK(neg.rel_ub == doctest::Approx(0.25));
  CHECK(neg.obj == doctest::Approx(-2.0));
}

TEST_CASE("symmetry oracle accepts the demo reflections and rejects others") {
  Minlp p = demo_linear();
  CHECK(is_symmetry_oracle(p, SignedPermutation({-2, -1, 3, 4})));
  CHECK(is_symmetry_oracle(p, SignedPermutation({1, 2, -4, -3})));
  CHECK(is_symmetry_oracle(p, SignedPermutation({-2, -1, -4, -3})));
  // Plain swap flips the sign pattern of the coefficients: not a symmetry.
  CHECK_FALSE(is_symmetry_oracle(p, SignedPermutation({2, 1, 3, 4})));
  CHECK_FALSE(is_symmetry_oracle(p, SignedPermutation({1, 2, 4, 3})));
  CHECK_FALSE(is_symmetry_oracle(p, SignedPermutation({-1, 2, 3, 4})));
}

TEST_CASE("brute-force enumeration finds the demo group of order 4") {
  Minlp p = demo_linear();
  std::vector<SignedPermutation> all = enumerate_symmetries_bruteforce(p);
  CHECK(all.size() == 4);
  std::set<std::vector<int>> s = perm_set(all);
  CHECK(s.count({1, 2, 3, 4}));
  CHECK(s.count({-2, -1, 3, 4}));
  CHECK(s.count({1, 2, -4, -3}));
  CHECK(s.count({-2, -1, -4, -3}));

  Minlp big;
  for (int i = 0; i < 9; ++i) big.vars.push_back({"v", 0.0, 1.0, false, 0.0});
  CHECK_THROWS_AS(enumerate_symmetries_bruteforce(big), std::exception);
}

TEST_CASE("closure generates the full group") {
  SignedPermutation g1({-2, -1, 3, 4});
  SignedPermutation g2({1, 2, -4, -3});
  auto cl = closure({g1, g2});
  REQUIRE(cl.has_value());
  CHECK(cl->size() == 4);

  // 4-cycle: order 4.
  auto cyc = closure({SignedPermutation({2, 3, 4, 1})});
  REQUIRE(cyc.has_value());
  CHECK(cyc->size() == 4);

  // Cap exceeded reports failure instead of truncating.
  CHECK_FALSE(closure({SignedPermutation({2, 3, 4, 1})}, 2).has_value());
}
