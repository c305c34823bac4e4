// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Symmetry detection graphs: node-and-edge-colored undirected graphs with
// distinguished variable nodes.  Colors are computed once from payloads via
// epsilon blocks; afterwards the graph is locked.

#ifndef SYMREF_SDG_HPP
#define SYMREF_SDG_HPP

#include <optional>
#include <string>
#include <vector>

#include "symref/model.hpp"

namespace symref {

enum class SymMode { Permutation, Reflection };

enum class NodeKind { Var, Operator, Value, Constraint };

struct SdgEdge {
  int u = 0;
  int v = 0;
  std::optional<double> value;  // no value -> sentinel color
  int color = -1;
};

class Sdg {
 public:
  // Variable nodes are created up front: n in permutation mode, 2n in
  // reflection mode (negations paired with their originals by plain edges).
  Sdg(SymMode mode, std::vector<VariableType> types, double eps = 1e-9);

  SymMode mode() const { return mode_; }
  int nvars() const { return nvars_; }
  double eps() const { return eps_; }

  // signed_index in {1..n} always, {-n..-1} in reflection mode.
  int var_node(int signed_index) const;
  // Inverse of var_node; 0 when the node is not a variable node.
  int signed_index_of(int node) const;

  int add_operator_node(int op_id);
  int add_value_node(double value);
  int add_constraint_node(int handler_id, double lhs, double rhs);

  // Rejects self-loops and edges between two Var nodes; the automatic pair
  // edges are the only Var-Var edges.
  void add_edge(int u, int v);
  void add_edge(int u, int v, double value);

  int nnodes() const { return static_cast<int>(kind_.size()); }
  NodeKind kind(int node) const { return kind_.at(node); }
  int op_id(int node) const;
  double value_payload(int node) const;
  const std::vector<SdgEdge>& edges() const { return edges_; }

  // Assigns colors to nodes and edges (pairwise disjoint ranges per node kind
  // plus a separate edge range; the valueless-edge sentinel is its own color)
  // and locks the graph.
  void compute_colors();
  bool locked() const { return locked_; }
  int node_color(int node) const;
  int edge_color(int edge_index) const;
  int ncolors() const { return ncolors_; }

  std::string dump() const;  // deterministic listing for golden tests

 private:
  struct ConsPayload {
    int handler = 0;
    double lhs = 0.0;
    double rhs = 0.0;
  };

  void check_unlocked() const;
  void check_node(int node) const;
  void check_endpoints(int u, int v) const;
  void push_edge(int u, int v, std::optional<double> value);

  SymMode mode_;
  int nvars_ = 0;
  double eps_;
  bool locked_ = false;

  std::vector<NodeKind> kind_;
  std::vector<int> payload_pos_;
  std::vector<VariableType> var_types_;   // payloads of variable nodes
  std::vector<int> op_ids_;
  std::vector<double> values_;
  std::vector<ConsPayload> cons_;
  std::vector<SdgEdge> edges_;
  std::vector<int> node_color_;
  int ncolors_ = 0;
};

}  // namespace symref

#endif
