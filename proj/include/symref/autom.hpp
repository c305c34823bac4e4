// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Automorphism machinery: edge-color elimination into a node-colored quotient
// graph, an individualization-refinement search for automorphism generators,
// and extraction of signed permutations on the distinguished variable nodes.

#ifndef SYMREF_AUTOM_HPP
#define SYMREF_AUTOM_HPP

#include <string>
#include <vector>

#include "symref/model.hpp"
#include "symref/sdg.hpp"

namespace symref {

struct ColoredGraph {
  int n = 0;
  std::vector<int> color;
  std::vector<std::vector<int>> adj;  // sorted, no duplicates

  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;
};

struct QuotientGraph {
  ColoredGraph graph;
  int original_nodes = 0;  // nodes [0, original_nodes) map 1:1 to the source
};

// Replaces every valued edge by an auxiliary node of the edge's color; one
// auxiliary node per (hub, color) pair.  Hubs are variable nodes when the
// graph has fewer constraint than variable nodes, else constraint nodes.
QuotientGraph eliminate_edge_colors(const Sdg& g);

// Deterministic generators of the color-preserving automorphism group.
// Throws when the graph exceeds node_budget.
std::vector<std::vector<int>> find_automorphism_generators(
    const ColoredGraph& g, int node_budget = 10000);

// Every color/adjacency-preserving bijection, for small graphs.
std::vector<std::vector<int>> automorphisms_bruteforce(const ColoredGraph& g);

// Closure of permutation generators (vectors of images); empty when above cap.
std::vector<std::vector<int>> permutation_closure(
    const std::vector<std::vector<int>>& gens, int n, std::size_t cap = 1000000);

// Restricts graph generators to the variable nodes of the source graph.
// Identities and duplicates are dropped; generators implied by the closure of
// the kept ones are pruned while the closure stays below prune_cap.
struct ExtractResult {
  std::vector<SignedPermutation> generators;
  bool success = true;
  std::string message;
};
ExtractResult extract_signed_permutations(const std::vector<std::vector<int>>& gens,
                                          const Sdg& g,
                                          std::size_t prune_cap = 100000);

}  // namespace symref

#endif
