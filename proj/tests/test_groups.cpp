// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "symref/groups.hpp"
#include "symref/instances.hpp"

using namespace symref;
using testfix::demo_linear;

TEST_CASE("generators split into independent factors by support") {
  SignedPermutation a({2, 1, 3, 4});
  SignedPermutation b({1, 2, 4, 3});
  std::vector<Factor> fs = split_components({a, b});
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].support == std::vector<int>{1, 2});
  CHECK(fs[1].support == std::vector<int>{3, 4});
  REQUIRE(fs[0].gens.size() == 1);
  REQUIRE(fs[1].gens.size() == 1);

  // Overlapping supports merge.
  SignedPermutation c({2, 3, 1, 4});
  std::vector<Factor> one = split_components({a, c});
  REQUIRE(one.size() == 1);
  CHECK(one[0].support == std::vector<int>{1, 2, 3});
}

TEST_CASE("row-column structure is reconstructed from swap generators") {
  // 3x2 matrix [[1,2],[3,4],[5,6]]: adjacent row swaps and the column swap.
  Factor f;
  f.support = {1, 2, 3, 4, 5, 6};
  f.gens = {SignedPermutation({2, 1, 4, 3, 6, 5}),
            SignedPermutation({3, 4, 1, 2, 5, 6}),
            SignedPermutation({1, 2, 5, 6, 3, 4})};
  MatrixSymmetry ms = detect_matrix_symmetry(f);
  REQUIRE(ms.cls == MatrixClass::RowColumn);
  REQUIRE(ms.matrix.size() == 3);
  REQUIRE(ms.matrix[0].size() == 2);
  // Rows and columns are recovered up to relabeling: cell sets must tile.
  std::set<int> seen;
  for (const auto& row : ms.matrix)
    for (int v : row) seen.insert(v);
  CHECK(seen == std::set<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("signed generators degrade matrix detection gracefully") {
  Factor f;
  f.support = {1, 2};
  f.gens = {SignedPermutation({-2, -1})};
  MatrixSymmetry ms = detect_matrix_symmetry(f);
  CHECK(ms.cls == MatrixClass::Unstructured);
}

TEST_CASE("packing detection reports a 3x2 matrix with column reflections") {
  Minlp p = gen_packing(3, 2);
  GroupReport rep = analyze(p, SymMode::Reflection, true);
  REQUIRE(rep.factors.size() == 1);
  const FactorReport& fr = rep.factors[0];
  CHECK(fr.factor.support == std::vector<int>{1, 2, 3, 4, 5, 6});
  CHECK(fr.matrix.cls == MatrixClass::RowColumn);
  CHECK(fr.matrix.matrix.size() == 3);
  CHECK(fr.matrix.matrix[0].size() == 2);
  CHECK(fr.matrix.column_reflections);
  CHECK(fr.has_full_reflection);
  CHECK(fr.unsigned_fraction == doctest::Approx(0.6));
  CHECK(rep.generators.size() == 5);
}

TEST_CASE("kissing detection matches the packing structure") {
  Minlp p = gen_kissing(3, 2);
  GroupReport rep = analyze(p, SymMode::Reflection, true);
  REQUIRE(rep.factors.size() == 1);
  CHECK(rep.factors[0].matrix.cls == MatrixClass::RowColumn);
  CHECK(rep.factors[0].matrix.column_reflections);
  CHECK(rep.factors[0].has_full_reflection);
}

TEST_CASE("energy detection stays unstructured but finds reflections") {
  Minlp p = gen_energy(3, 3);
  GroupReport rep = analyze(p, SymMode::Reflection, true);
  REQUIRE(rep.factors.size() == 1);
  CHECK(rep.factors[0].matrix.cls == MatrixClass::Unstructured);
  CHECK(rep.factors[0].has_full_reflection);
  CHECK(rep.factors[0].unsigned_fraction == doctest::Approx(4.0 / 7.0));
  CHECK(rep.generators.size() == 7);
}

TEST_CASE("full reflection membership in the generated group") {
  // Generated directly: reflections on {1,2}.
  CHECK(detect_full_reflection({SignedPermutation({-1, 2}), SignedPermutation({1, -2})},
                               {1, 2}, 2));
  // The demo generator alone never composes to the full flip of {1,2}.
  CHECK_FALSE(detect_full_reflection({SignedPermutation({-2, -1, 3, 4})}, {1, 2}, 4));
  CHECK_FALSE(detect_full_reflection({}, {1}, 1));
}

TEST_CASE("orbit partition merges up to sign") {
  auto o1 = orbits({SignedPermutation({2, 1, 3})}, 3);
  REQUIRE(o1.size() == 2);
  CHECK(o1[0] == std::vector<int>{1, 2});
  CHECK(o1[1] == std::vector<int>{3});

  // Signed generators list the signed orbit members.
  auto o2 = orbits({SignedPermutation({-2, -1, 3, 4}), SignedPermutation({1, 2, -4, -3})}, 4);
  REQUIRE(o2.size() == 2);
  CHECK(o2[0] == std::vector<int>{1, -2});
  CHECK(o2[1] == std::vector<int>{3, -4});

  auto o3 = orbits({SignedPermutation({-1})}, 1);
  REQUIRE(o3.size() == 1);
  CHECK(o3[0] == std::vector<int>{1, -1});
}

TEST_CASE("demo analysis doubles under the enhanced encoding") {
  Minlp p = demo_linear();
  GroupReport basic = analyze(p, SymMode::Reflection, false);
  auto cb = closure(basic.generators);
  REQUIRE(cb.has_value());
  CHECK(cb->size() == 2);
  CHECK(basic.sdg_nodes == 15);
  CHECK(basic.quotient_nodes == 21);

  GroupReport enh = analyze(p, SymMode::Reflection, true);
  auto ce = closure(enh.generators);
  REQUIRE(ce.has_value());
  CHECK(ce->size() == 4);
  CHECK(enh.sdg_nodes == 11);
  CHECK(enh.quotient_nodes == 15);
  REQUIRE(enh.factors.size() == 2);
  CHECK(enh.factors[0].factor.support == std::vector<int>{1, 2});
  CHECK(enh.factors[1].factor.support == std::vector<int>{3, 4});

  // Orbits under the enhanced group: {1,-2} and the two singleton pairs.
  REQUIRE(enh.orbit_partition.size() == 2);
}

TEST_CASE("report text and json are well formed") {
  Minlp p = demo_linear();
  GroupReport rep = analyze(p, SymMode::Reflection, true);
  std::string text = rep.to_text();
  CHECK(text.find("generators: 2") != std::string::npos);
  CHECK(text.find("(1,-2)(2,-1)") != std::string::npos);
  CHECK(text.find("factors: 2") != std::string::npos);

  nlohmann::json js = nlohmann::json::parse(rep.to_json());
  CHECK(js["variables"] == 4);
  CHECK(js["generators"].size() == 2);
  CHECK(js["factors"].size() == 2);
  CHECK(js["enhanced"] == true);
}
