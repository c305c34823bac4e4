// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0

#include "symref/sdg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "symref/expr.hpp"

namespace symref {

namespace {

// Difference used by the epsilon blocks; equal infinities count as zero.
double payload_diff(double a, double b) {
  if (a == b) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
  return std::fabs(a - b);
}

// Greedy leftmost-maximal blocks over lexicographically sorted payload rows:
// a row joins the current block iff it differs from the block's first row by
// at most eps in every component.  Returns one block id per row, ids ordered
// by the sorted payloads; *nblocks receives the block count.
std::vector<int> eps_blocks(const std::vector<std::vector<double>>& rows,
                            double eps, int* nblocks) {
  std::vector<int> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rows[a] < rows[b]; });
  std::vector<int> block(rows.size(), -1);
  int current = -1;
  const std::vector<double>* first = nullptr;
  for (int idx : order) {
    bool fits = first != nullptr;
    if (fits) {
      for (std::size_t k = 0; k < rows[idx].size(); ++k) {
        if (payload_diff(rows[idx][k], (*first)[k]) > eps) {
          fits = false;
          break;
        }
      }
    }
    if (!fits) {
      ++current;
      first = &rows[idx];
    }
    block[idx] = current;
  }
  if (nblocks) *nblocks = current + 1;
  return block;
}

}  // namespace

Sdg::Sdg(SymMode mode, std::vector<VariableType> types, double eps)
    : mode_(mode), nvars_(static_cast<int>(types.size())), eps_(eps) {
  for (int i = 0; i < nvars_; ++i) {
    kind_.push_back(NodeKind::Var);
    payload_pos_.push_back(static_cast<int>(var_types_.size()));
    var_types_.push_back(types[i]);
  }
  if (mode_ == SymMode::Reflection) {
    for (int i = 0; i < nvars_; ++i) {
      kind_.push_back(NodeKind::Var);
      payload_pos_.push_back(static_cast<int>(var_types_.size()));
      var_types_.push_back(types[i].negated());
    }
    for (int i = 0; i < nvars_; ++i) push_edge(i, nvars_ + i, std::nullopt);
  }
}

int Sdg::var_node(int signed_index) const {
  int a = std::abs(signed_index);
  if (a < 1 || a > nvars_) throw std::out_of_range("sdg: variable index");
  if (signed_index > 0) return a - 1;
  if (mode_ != SymMode::Reflection)
    throw std::logic_error("sdg: negated variable outside reflection mode");
  return nvars_ + a - 1;
}

int Sdg::signed_index_of(int node) const {
  check_node(node);
  if (kind_[node] != NodeKind::Var) return 0;
  return node < nvars_ ? node + 1 : -(node - nvars_ + 1);
}

int Sdg::add_operator_node(int op_id) {
  check_unlocked();
  kind_.push_back(NodeKind::Operator);
  payload_pos_.push_back(static_cast<int>(op_ids_.size()));
  op_ids_.push_back(op_id);
  return nnodes() - 1;
}

int Sdg::add_value_node(double value) {
  check_unlocked();
  kind_.push_back(NodeKind::Value);
  payload_pos_.push_back(static_cast<int>(values_.size()));
  values_.push_back(value);
  return nnodes() - 1;
}

int Sdg::add_constraint_node(int handler_id, double lhs, double rhs) {
  check_unlocked();
  kind_.push_back(NodeKind::Constraint);
  payload_pos_.push_back(static_cast<int>(cons_.size()));
  cons_.push_back({handler_id, lhs, rhs});
  return nnodes() - 1;
}

void Sdg::add_edge(int u, int v) {
  check_endpoints(u, v);
  push_edge(u, v, std::nullopt);
}

void Sdg::add_edge(int u, int v, double value) {
  check_endpoints(u, v);
  push_edge(u, v, value);
}

void Sdg::check_endpoints(int u, int v) const {
  check_unlocked();
  check_node(u);
  check_node(v);
  if (u == v) throw std::invalid_argument("sdg: self-loop");
  if (kind_[u] == NodeKind::Var && kind_[v] == NodeKind::Var)
    throw std::invalid_argument("sdg: edge between variable nodes");
}

void Sdg::push_edge(int u, int v, std::optional<double> value) {
  edges_.push_back({u, v, value, -1});
}

int Sdg::op_id(int node) const {
  check_node(node);
  if (kind_[node] != NodeKind::Operator) throw std::logic_error("sdg: not an operator");
  return op_ids_[payload_pos_[node]];
}

double Sdg::value_payload(int node) const {
  check_node(node);
  if (kind_[node] != NodeKind::Value) throw std::logic_error("sdg: not a value");
  return values_[payload_pos_[node]];
}

void Sdg::compute_colors() {
  check_unlocked();
  node_color_.assign(nnodes(), -1);
  int base = 0;

  auto color_kind = [&](const std::vector<std::vector<double>>& rows,
                        const std::vector<int>& nodes) {
    if (nodes.empty()) return;
    int nblocks = 0;
    std::vector<int> block = eps_blocks(rows, eps_, &nblocks);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      node_color_[nodes[i]] = base + block[i];
    base += nblocks;
  };

  std::vector<std::vector<double>> rows;
  std::vector<int> nodes;
  for (NodeKind kind : {NodeKind::Var, NodeKind::Operator, NodeKind::Value,
                        NodeKind::Constraint}) {
    rows.clear();
    nodes.clear();
    for (int v = 0; v < nnodes(); ++v) {
      if (kind_[v] != kind) continue;
      nodes.push_back(v);
      switch (kind) {
        case NodeKind::Var: {
          const VariableType& t = var_types_[payload_pos_[v]];
          rows.push_back({t.rel_lb, t.rel_ub, t.obj, t.integral ? 1.0 : 0.0});
          break;
        }
        case NodeKind::Operator:
          rows.push_back({static_cast<double>(op_ids_[payload_pos_[v]])});
          break;
        case NodeKind::Value:
          rows.push_back({values_[payload_pos_[v]]});
          break;
        case NodeKind::Constraint: {
          const ConsPayload& c = cons_[payload_pos_[v]];
          rows.push_back({static_cast<double>(c.handler), c.lhs, c.rhs});
          break;
        }
      }
    }
    color_kind(rows, nodes);
  }

  // Edges: the valueless sentinel takes its own color ahead of the blocks.
  bool any_plain = false;
  rows.clear();
  std::vector<int> valued;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].value) {
      valued.push_back(static_cast<int>(e));
      rows.push_back({*edges_[e].value});
    } else {
      any_plain = true;
    }
  }
  int plain_color = base;
  if (any_plain) ++base;
  for (auto& e : edges_)
    if (!e.value) e.color = plain_color;
  if (!valued.empty()) {
    int nblocks = 0;
    std::vector<int> block = eps_blocks(rows, eps_, &nblocks);
    for (std::size_t i = 0; i < valued.size(); ++i)
      edges_[valued[i]].color = base + block[i];
    base += nblocks;
  }

  ncolors_ = base;
  locked_ = true;
}

int Sdg::node_color(int node) const {
  check_node(node);
  if (!locked_) throw std::logic_error("sdg: colors not computed");
  return node_color_[node];
}

int Sdg::edge_color(int edge_index) const {
  if (!locked_) throw std::logic_error("sdg: colors not computed");
  return edges_.at(edge_index).color;
}

void Sdg::check_unlocked() const {
  if (locked_) throw std::logic_error("sdg: locked after color computation");
}

void Sdg::check_node(int node) const {
  if (node < 0 || node >= nnodes()) throw std::out_of_range("sdg: node index");
}

std::string Sdg::dump() const {
  std::string out;
  for (int v = 0; v < nnodes(); ++v) {
    out.append("node ");
    out.append(std::to_string(v));
    switch (kind_[v]) {
      case NodeKind::Var: {
        int s = signed_index_of(v);
        const VariableType& t = var_types_[payload_pos_[v]];
        out.append(" var ");
        out.append(s > 0 ? "x" : "nx");
        out.append(std::to_string(std::abs(s)));
        out.append(" [");
        out.append(format_number(t.rel_lb));
        out.push_back(',');
        out.append(format_number(t.rel_ub));
        out.append("] obj=");
        out.append(format_number(t.obj));
        if (t.integral) out.append(" int");
        break;
      }
      case NodeKind::Operator:
        out.append(" op ");
        out.append(std::to_string(op_ids_[payload_pos_[v]]));
        break;
      case NodeKind::Value:
        out.append(" value ");
        out.append(format_number(values_[payload_pos_[v]]));
        break;
      case NodeKind::Constraint: {
        const ConsPayload& c = cons_[payload_pos_[v]];
        out.append(" cons h=");
        out.append(std::to_string(c.handler));
        out.append(" [");
        out.append(format_number(c.lhs));
        out.push_back(',');
        out.append(format_number(c.rhs));
        out.push_back(']');
        break;
      }
    }
    if (locked_) {
      out.append(" color=");
      out.append(std::to_string(node_color_[v]));
    }
    out.push_back('\n');
  }
  for (const SdgEdge& e : edges_) {
    out.append("edge ");
    out.append(std::to_string(e.u));
    out.push_back(' ');
    out.append(std::to_string(e.v));
    if (e.value) {
      out.append(" value=");
      out.append(format_number(*e.value));
    }
    if (locked_) {
      out.append(" color=");
      out.append(std::to_string(e.color));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace symref
