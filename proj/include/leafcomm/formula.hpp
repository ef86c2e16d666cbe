/*! \file formula.hpp
  \brief De Morgan formulas whose leaves are gates from a fixed class.

  Variable x1 is the least significant bit of an assignment integer. Leaves are
  numbered left to right; a formula's "leaf cube" is {0,1}^size with leaf i at bit i.
*/
#pragma once

#include "leafcomm/common.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace leafcomm {

enum class GateKind { Xor, Ltf, Sym, Table };

struct LeafGate {
  GateKind kind = GateKind::Xor;
  int n = 0;
  u64 mask = 0;        // Xor
  bool negated = false;
  std::vector<std::int64_t> weights;  // Ltf: output 1 iff sum w_i x_i >= threshold
  std::int64_t threshold = 0;
  std::vector<std::uint8_t> spectrum;  // Sym: n+1 entries
  std::vector<std::uint8_t> table;     // Table: 2^n entries, n <= 24

  static LeafGate xor_mask(int n, u64 mask, bool negated = false);
  static LeafGate var(int n, int index0, bool negated = false);
  static LeafGate ltf(std::vector<std::int64_t> weights, std::int64_t threshold);
  static LeafGate sym(std::vector<std::uint8_t> spectrum);
  static LeafGate truth_table(int n, std::vector<std::uint8_t> table);

  bool eval(u64 x) const;
  bool operator==(const LeafGate& o) const = default;
};

enum class NodeKind { And, Or, Not, Leaf };

/// Node of a post-ordered tree: children always precede their parent.
struct Node {
  NodeKind kind = NodeKind::Leaf;
  int left = -1;
  int right = -1;
  int leaf = -1;  // slot or leaf index for Leaf nodes
  bool operator==(const Node& o) const = default;
};

/// Input of a skeleton leaf: an original formula leaf or the output of an earlier piece.
struct Slot {
  bool placeholder = false;
  int index = 0;
  bool operator==(const Slot& o) const = default;
};

/*! \brief Gate structure over abstract inputs ("slots").

  Slot i is input bit i; Leaf nodes reference slots in left-to-right order.
*/
struct Skeleton {
  std::vector<Node> nodes;
  int root = -1;
  std::vector<Slot> slots;

  int arity() const { return static_cast<int>(slots.size()); }
  bool eval(const std::vector<std::uint8_t>& slot_values) const;
  bool eval_bits(u64 slot_bits) const;
  /// Function of the slots, arity <= 24.
  std::vector<std::uint8_t> truth_table() const;
  bool operator==(const Skeleton& o) const = default;
};

class Formula {
 public:
  Formula() = default;
  /// Validates shape: post-order nodes, binary And/Or, unary Not, leaves 0..s-1 left to right.
  Formula(int n, std::vector<LeafGate> leaves, std::vector<Node> nodes, int root);

  int num_vars() const { return n_; }
  int size() const { return static_cast<int>(leaves_.size()); }
  const std::vector<LeafGate>& leaves() const { return leaves_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

  bool eval(u64 x) const;
  std::vector<std::uint8_t> leaf_values(u64 x) const;
  /// Output as a function of leaf values.
  bool eval_leaves(const std::vector<std::uint8_t>& leaf_values) const;
  Skeleton skeleton() const;

  bool operator==(const Formula& o) const = default;

 private:
  int n_ = 0;
  std::vector<LeafGate> leaves_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

Formula parse_formula(std::string_view text, int n);
std::string unparse(const Formula& f);
std::string unparse_gate(const LeafGate& g);

/// 2^n output bits, index i = assignment i; n <= 24.
std::vector<std::uint8_t> truth_table(const Formula& f);

enum class GateClass { Var, Xor, Ltf, Sym, Table, Mixed };
GateClass parse_gate_class(std::string_view name);

/// Uniform random binary tree shape (Remy's algorithm) with random And/Or, occasional Not, random gates.
Formula random_formula(int n, int s, GateClass gate_class, u64 seed);
LeafGate random_gate(int n, GateClass gate_class, Rng& rng);

/// Build helpers for tests and fixtures.
Formula formula_from_skeleton(int n, const Skeleton& sk, std::vector<LeafGate> leaves);

struct Piece {
  int placeholder = 0;
  Skeleton body;
};

/*! \brief Result of deepest-first peeling.

  Pieces are listed in peel order; piece j may read placeholders of earlier pieces.
*/
struct CompositionTree {
  Skeleton top;
  std::vector<Piece> pieces;
  int threshold = 1;
  int num_leaves = 0;

  /// Evaluates top after all pieces, on an assignment to the original leaves.
  bool eval(const std::vector<std::uint8_t>& leaf_values) const;
  /// Substitutes the pieces back into the top skeleton.
  Skeleton recompose() const;
};

CompositionTree decompose(const Formula& f, int t);
CompositionTree decompose(const Skeleton& sk, int t);

}  // namespace leafcomm
