// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Group structure analysis: independent factors, row/column matrix symmetry
// reconstruction, reflection detection, orbits, and the detection report.

#ifndef SYMREF_GROUPS_HPP
#define SYMREF_GROUPS_HPP

#include <string>
#include <vector>

#include "symref/model.hpp"
#include "symref/sdg.hpp"

namespace symref {

enum class MatrixClass { RowColumn, Row, Unstructured };

struct MatrixSymmetry {
  MatrixClass cls = MatrixClass::Unstructured;
  std::vector<std::vector<int>> matrix;  // rows x cols of variable indices
  bool column_reflections = false;
  bool row_reflections = false;
};

struct Factor {
  std::vector<int> support;  // ascending variable indices
  std::vector<SignedPermutation> gens;
};

// Partitions the generators by overlapping supports.
std::vector<Factor> split_components(const std::vector<SignedPermutation>& gens);

// Unsigned generators must all be products of disjoint 2-cycles; their
// 2-cycle counts split them into row and column swap classes ("more 2-cycles
// = row swaps").  Rows/columns are stitched from shared 2-cycles; any
// ambiguity degrades the class.
MatrixSymmetry detect_matrix_symmetry(const Factor& f, std::size_t closure_cap = 1000000);

// Membership of the pure reflection on `core` (identity elsewhere) in the
// generated group; falls back to generator scan above the closure cap.
bool detect_full_reflection(const std::vector<SignedPermutation>& gens,
                            const std::vector<int>& core, int n,
                            std::size_t closure_cap = 1000000);

// Variable orbit partition (indices sharing an orbit up to sign).
std::vector<std::vector<int>> orbits(const std::vector<SignedPermutation>& gens, int n);

struct FactorReport {
  Factor factor;
  MatrixSymmetry matrix;
  std::vector<int> reflection_core;  // sign-touched subset of the support
  bool has_full_reflection = false;
  double unsigned_fraction = 0.0;
};

struct GroupReport {
  int nvars = 0;
  SymMode mode = SymMode::Reflection;
  bool enhanced = false;
  Centers centers;
  std::vector<SignedPermutation> generators;
  std::vector<FactorReport> factors;   // ordered by smallest support index
  std::vector<std::vector<int>> orbit_partition;
  int sdg_nodes = 0;
  int quotient_nodes = 0;

  std::string to_text() const;
  std::string to_json() const;
};

// Full detection pipeline: build graph, eliminate edge colors, search
// automorphisms, extract signed permutations, classify.
GroupReport analyze(const Minlp& p, SymMode mode, bool enhanced,
                    int node_budget = 10000);

}  // namespace symref

#endif
