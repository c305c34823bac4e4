// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Instance generators, the plain-text instance format, and graph helpers.
//
// Format, one record per line, '#' starts a comment:
//   var <name> <lb> <ub> <cont|int|bin> <objcoef>
//   con <expr|expr-enhanced> <sexpr> <le|ge|eq> <rhs>
//   con stableset (graph (node <var> <w>)... (edge <var> <var>)...) <le|ge|eq> <rhs>
// S-expressions: (+ e...), (* e...), (pow e k), (abs e), (neg e), names, numbers.

#ifndef SYMREF_INSTANCES_HPP
#define SYMREF_INSTANCES_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "symref/model.hpp"

namespace symref {

// l1 balls of radius r in the unit box; maximizes r.
Minlp gen_packing(int n, int d);
// Unit spheres touching a center sphere of radius 2; maximizes the scaled
// minimum pairwise distance alpha.
Minlp gen_kissing(int n, int d);
// Inverse-square pair potentials on the unit sphere, lifted to alpha.
Minlp gen_energy(int n, int d);
// Edge-counting cut model with binary side and cut indicators.
Minlp gen_maxcut(int nnodes, const std::vector<std::pair<int, int>>& edges);

std::vector<std::pair<int, int>> complete_graph(int n);
std::vector<std::pair<int, int>> cycle_graph(int n);
std::vector<std::pair<int, int>> petersen_graph();

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what_)
      : std::runtime_error(what_), line(line_) {}
};

Minlp parse_instance(const std::string& text);
Minlp read_instance_file(const std::string& path);
std::string write_instance(const Minlp& p);

// CLI entry point (detect | solve | gen).  Returns the process exit code:
// 0 ok, 1 infeasible, 2 parse/usage error, 3 limit or budget reached.
int run_cli(int argc, const char* const* argv);

}  // namespace symref

#endif
