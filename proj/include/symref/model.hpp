// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Problem data, signed permutations, reflections around domain centers, and
// the brute-force symmetry oracles used as ground truth in tests.

#ifndef SYMREF_MODEL_HPP
#define SYMREF_MODEL_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "symref/expr.hpp"

namespace symref {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Variable {
  std::string name;
  double lb = -kInf;
  double ub = kInf;
  bool integral = false;
  double obj = 0.0;  // objective coefficient; the sense is always minimize
};

enum class Rel { Le, Ge, Eq };

enum class ConsTag { Expr, ExprEnhanced, StableSet };

struct StableSetData {
  std::vector<int> vars;                    // 1-based variable indices
  std::vector<double> weights;              // parallel to vars
  std::vector<std::pair<int, int>> edges;   // positions into vars, 0-based
};

struct Constraint {
  std::string name;
  ConsTag tag = ConsTag::Expr;
  ExprTree tree;           // Expr / ExprEnhanced
  Rel rel = Rel::Le;
  double rhs = 0.0;
  StableSetData stable;    // StableSet
};

struct Minlp {
  std::string name;
  std::vector<Variable> vars;
  std::vector<Constraint> cons;

  int nvars() const { return static_cast<int>(vars.size()); }
};

// A bijection g on {-n,..,-1,1,..,n} with g(-i) = -g(i), stored by the images
// of the positive indices.
class SignedPermutation {
 public:
  SignedPermutation() = default;
  explicit SignedPermutation(std::vector<int> images);
  static SignedPermutation identity(int n);

  int n() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const;  // i in {-n..-1, 1..n}
  const std::vector<int>& images() const { return img_; }

  SignedPermutation inverse() const;
  bool is_identity() const;
  bool is_involution() const;
  bool is_unsigned() const;                 // all images positive
  std::vector<int> support() const;         // moved positive indices, ascending
  // Moved 2-cycles of an unsigned involution; empty optional otherwise.
  std::optional<std::vector<std::pair<int, int>>> two_cycles() const;

  std::string cycles() const;  // signed cycle text, e.g. "(1,-2)(2,-1)"

  bool operator==(const SignedPermutation& o) const { return img_ == o.img_; }
  bool operator<(const SignedPermutation& o) const { return img_ < o.img_; }

 private:
  std::vector<int> img_;
};

// g2 after g1.
SignedPermutation compose(const SignedPermutation& g2, const SignedPermutation& g1);

// Reflection centers: midpoint for two-sided finite or free domains, 0
// otherwise.  Also reports which variables are reflectable.
struct Centers {
  std::vector<double> xi;
  std::vector<bool> reflectable;
};
Centers compute_centers(const Minlp& p);

// Color payload of a (possibly negated) variable.
struct VariableType {
  double rel_lb = 0.0;
  double rel_ub = 0.0;
  double obj = 0.0;
  bool integral = false;

  VariableType negated() const { return {-rel_ub, -rel_lb, -obj, integral}; }
  bool operator==(const VariableType&) const = default;
};
// Type of x_i relative to its center (signed_index > 0) or of its negation
// (signed_index < 0).
VariableType variable_type(const Minlp& p, const Centers& c, int signed_index);

// x_i' = xi_i + sign(inv(i)) * (x_|inv(i)| - xi_|inv(i)|) with inv = g^-1.
std::vector<double> apply_reflection(const std::vector<double>& x,
                                     const SignedPermutation& g,
                                     const std::vector<double>& centers);

// Necessary-condition certificate: exact domain/objective/linear checks plus
// deterministic sampling for nonlinear constraints.
bool is_symmetry_oracle(const Minlp& p, const SignedPermutation& g,
                        int nsamples = 64, std::uint64_t seed = 1);

// All signed permutations passing the oracle checks, via backtracking over
// type-compatible images.  Throws when nvars exceeds max_n.
std::vector<SignedPermutation> enumerate_symmetries_bruteforce(const Minlp& p,
                                                               int max_n = 8);

// Group closure of the generators; empty optional when cap is exceeded.
std::optional<std::vector<SignedPermutation>> closure(
    const std::vector<SignedPermutation>& gens, std::size_t cap = 1000000);

}  // namespace symref

#endif
