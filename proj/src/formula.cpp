#include "leafcomm/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace leafcomm {

// ---------------------------------------------------------------- leaf gates

LeafGate LeafGate::xor_mask(int n, u64 mask, bool negated) {
  LeafGate g;
  g.kind = GateKind::Xor;
  g.n = n;
  g.mask = mask & low_mask(n);
  g.negated = negated;
  return g;
}

LeafGate LeafGate::var(int n, int index0, bool negated) { return xor_mask(n, u64{1} << index0, negated); }

LeafGate LeafGate::ltf(std::vector<std::int64_t> weights, std::int64_t threshold) {
  LeafGate g;
  g.kind = GateKind::Ltf;
  g.n = static_cast<int>(weights.size());
  g.weights = std::move(weights);
  g.threshold = threshold;
  return g;
}

LeafGate LeafGate::sym(std::vector<std::uint8_t> spectrum) {
  if (spectrum.empty()) throw ValidationError("symmetric gate needs a spectrum of length n+1");
  LeafGate g;
  g.kind = GateKind::Sym;
  g.n = static_cast<int>(spectrum.size()) - 1;
  g.spectrum = std::move(spectrum);
  return g;
}

LeafGate LeafGate::truth_table(int n, std::vector<std::uint8_t> table) {
  if (n > 24) throw ValidationError("table gates are limited to n <= 24");
  if (table.size() != (std::size_t{1} << n)) throw ValidationError("table gate needs 2^n entries");
  LeafGate g;
  g.kind = GateKind::Table;
  g.n = n;
  g.table = std::move(table);
  return g;
}

bool LeafGate::eval(u64 x) const {
  switch (kind) {
    case GateKind::Xor:
      return parity(x & mask) != negated;
    case GateKind::Ltf: {
      std::int64_t sum = 0;
      for (int i = 0; i < n; ++i)
        if ((x >> i) & 1) sum += weights[i];
      return sum >= threshold;
    }
    case GateKind::Sym:
      return spectrum[popcount(x & low_mask(n))] != 0;
    case GateKind::Table:
      return table[x & low_mask(n)] != 0;
  }
  return false;
}

// ---------------------------------------------------------------- skeletons

bool Skeleton::eval(const std::vector<std::uint8_t>& slot_values) const {
  std::vector<std::uint8_t> val(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& nd = nodes[i];
    switch (nd.kind) {
      case NodeKind::Leaf: val[i] = slot_values[nd.leaf]; break;
      case NodeKind::Not: val[i] = !val[nd.left]; break;
      case NodeKind::And: val[i] = val[nd.left] && val[nd.right]; break;
      case NodeKind::Or: val[i] = val[nd.left] || val[nd.right]; break;
    }
  }
  return val[root] != 0;
}

bool Skeleton::eval_bits(u64 slot_bits) const {
  std::vector<std::uint8_t> v(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) v[i] = (slot_bits >> i) & 1;
  return eval(v);
}

std::vector<std::uint8_t> Skeleton::truth_table() const {
  int m = arity();
  if (m > 24) throw ValidationError("truth table limited to 24 inputs");
  std::vector<std::uint8_t> t(std::size_t{1} << m);
  std::vector<std::uint8_t> v(m);
  for (u64 x = 0; x < t.size(); ++x) {
    for (int i = 0; i < m; ++i) v[i] = (x >> i) & 1;
    t[x] = eval(v);
  }
  return t;
}

// ---------------------------------------------------------------- formulas

Formula::Formula(int n, std::vector<LeafGate> leaves, std::vector<Node> nodes, int root)
    : n_(n), leaves_(std::move(leaves)), nodes_(std::move(nodes)), root_(root) {
  if (n_ < 1) throw ValidationError("formula needs at least one variable");
  if (leaves_.empty()) throw ValidationError("formula needs at least one leaf");
  if (root_ != static_cast<int>(nodes_.size()) - 1) throw ValidationError("root must be the last node");
  int next_leaf = 0;
  std::vector<int> uses(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& nd = nodes_[i];
    auto child_ok = [&](int c) { return c >= 0 && c < static_cast<int>(i); };
    switch (nd.kind) {
      case NodeKind::Leaf:
        if (nd.leaf != next_leaf++) throw ValidationError("leaves must be numbered left to right");
        break;
      case NodeKind::Not:
        if (!child_ok(nd.left) || nd.right != -1) throw ValidationError("not node needs exactly one child");
        ++uses[nd.left];
        break;
      case NodeKind::And:
      case NodeKind::Or:
        if (!child_ok(nd.left) || !child_ok(nd.right)) throw ValidationError("and/or node needs two children");
        ++uses[nd.left];
        ++uses[nd.right];
        break;
    }
  }
  if (next_leaf != static_cast<int>(leaves_.size())) throw ValidationError("leaf count mismatch");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (uses[i] != 1) throw ValidationError("formula nodes must form a tree");
  for (const LeafGate& g : leaves_)
    if (g.n != n_) throw ValidationError("leaf gate arity differs from formula arity");
}

std::vector<std::uint8_t> Formula::leaf_values(u64 x) const {
  std::vector<std::uint8_t> v(leaves_.size());
  for (std::size_t i = 0; i < leaves_.size(); ++i) v[i] = leaves_[i].eval(x);
  return v;
}

bool Formula::eval_leaves(const std::vector<std::uint8_t>& lv) const {
  std::vector<std::uint8_t> val(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& nd = nodes_[i];
    switch (nd.kind) {
      case NodeKind::Leaf: val[i] = lv[nd.leaf]; break;
      case NodeKind::Not: val[i] = !val[nd.left]; break;
      case NodeKind::And: val[i] = val[nd.left] && val[nd.right]; break;
      case NodeKind::Or: val[i] = val[nd.left] || val[nd.right]; break;
    }
  }
  return val[root_] != 0;
}

bool Formula::eval(u64 x) const { return eval_leaves(leaf_values(x)); }

Skeleton Formula::skeleton() const {
  Skeleton sk;
  sk.nodes = nodes_;
  sk.root = root_;
  sk.slots.resize(leaves_.size());
  for (std::size_t i = 0; i < leaves_.size(); ++i) sk.slots[i] = Slot{false, static_cast<int>(i)};
  return sk;
}

Formula formula_from_skeleton(int n, const Skeleton& sk, std::vector<LeafGate> leaves) {
  return Formula(n, std::move(leaves), sk.nodes, sk.root);
}

std::vector<std::uint8_t> truth_table(const Formula& f) {
  int n = f.num_vars();
  if (n > 24) throw ValidationError("truth table limited to n <= 24");
  std::vector<std::uint8_t> t(std::size_t{1} << n);
  for (u64 x = 0; x < t.size(); ++x) t[x] = f.eval(x);
  return t;
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, int n) : s_(text), n_(n) {}

  Formula run() {
    if (n_ < 1 || n_ > 64) throw ValidationError("number of variables must be in 1..64");
    expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    int root = static_cast<int>(nodes_.size()) - 1;
    return Formula(n_, std::move(leaves_), std::move(nodes_), root);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("syntax error at offset " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size()) fail(std::string("expected '") + c + "', found end of input");
    if (s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  std::string word() {
    skip_ws();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                s_[pos_] == '+'))
      ++pos_;
    if (b == pos_) fail(pos_ >= s_.size() ? "unexpected end of input" : "expected a token");
    return std::string(s_.substr(b, pos_ - b));
  }

  std::int64_t integer() {
    std::size_t at = (skip_ws(), pos_);
    std::string w = word();
    std::size_t i = (w[0] == '-' || w[0] == '+') ? 1 : 0;
    if (i == w.size() || !std::all_of(w.begin() + i, w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      pos_ = at;
      fail("expected an integer");
    }
    try {
      return std::stoll(w);
    } catch (const std::out_of_range&) {
      pos_ = at;
      fail("integer out of machine range");
    }
  }

  int variable() {
    std::size_t at = (skip_ws(), pos_);
    std::int64_t k = integer();
    if (k < 1 || k > n_) {
      pos_ = at;
      throw ValidationError("variable index " + std::to_string(k) + " out of range 1.." + std::to_string(n_) +
                            " at offset " + std::to_string(at + 1));
    }
    return static_cast<int>(k - 1);
  }

  int push(Node nd) {
    nodes_.push_back(nd);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int leaf(LeafGate g) {
    leaves_.push_back(std::move(g));
    return push(Node{NodeKind::Leaf, -1, -1, static_cast<int>(leaves_.size()) - 1});
  }

  int expr() {
    expect('(');
    std::size_t at = (skip_ws(), pos_);
    std::string kind = word();
    int id;
    if (kind == "and" || kind == "or") {
      int l = expr();
      int r = expr();
      id = push(Node{kind == "and" ? NodeKind::And : NodeKind::Or, l, r, -1});
    } else if (kind == "not") {
      int c = expr();
      id = push(Node{NodeKind::Not, c, -1, -1});
    } else if (kind == "var") {
      id = leaf(LeafGate::var(n_, variable()));
    } else if (kind == "xor" || kind == "nxor") {
      u64 mask = 0;
      while (!peek(')')) {
        if (pos_ >= s_.size()) fail("expected ')', found end of input");
        mask ^= u64{1} << variable();
      }
      id = leaf(LeafGate::xor_mask(n_, mask, kind == "nxor"));
    } else if (kind == "ltf") {
      expect('(');
      std::vector<std::int64_t> w;
      while (!peek(')')) {
        if (pos_ >= s_.size()) fail("expected ')', found end of input");
        w.push_back(integer());
      }
      expect(')');
      if (static_cast<int>(w.size()) != n_) fail("ltf needs exactly n weights");
      std::int64_t theta = integer();
      id = leaf(LeafGate::ltf(std::move(w), theta));
    } else if (kind == "sym") {
      std::vector<std::uint8_t> b;
      while (!peek(')')) {
        if (pos_ >= s_.size()) fail("expected ')', found end of input");
        std::int64_t v = integer();
        if (v != 0 && v != 1) fail("sym spectrum entries must be 0 or 1");
        b.push_back(static_cast<std::uint8_t>(v));
      }
      if (static_cast<int>(b.size()) != n_ + 1) fail("sym needs exactly n+1 spectrum bits");
      id = leaf(LeafGate::sym(std::move(b)));
    } else if (kind == "table") {
      if (n_ > 24) fail("table gates are limited to n <= 24");
      std::string hex = word();
      std::size_t bits = std::size_t{1} << n_;
      std::vector<std::uint8_t> t(bits, 0);
      std::size_t digits = hex.size();
      for (std::size_t d = 0; d < digits; ++d) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[digits - 1 - d])));
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else fail("table expects a hexadecimal string");
        for (int b = 0; b < 4; ++b) {
          if (!((v >> b) & 1)) continue;
          std::size_t idx = d * 4 + b;
          if (idx >= bits) fail("table hex has more than 2^n bits");
          t[idx] = 1;
        }
      }
      id = leaf(LeafGate::truth_table(n_, std::move(t)));
    } else {
      pos_ = at;
      throw ValidationError("unknown gate kind '" + kind + "' at offset " + std::to_string(at + 1));
    }
    expect(')');
    return id;
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
  std::vector<LeafGate> leaves_;
  std::vector<Node> nodes_;
};

}  // namespace

Formula parse_formula(std::string_view text, int n) { return Parser(text, n).run(); }

std::string unparse_gate(const LeafGate& g) {
  std::ostringstream os;
  switch (g.kind) {
    case GateKind::Xor:
      if (popcount(g.mask) == 1 && !g.negated) {
        os << "(var " << std::countr_zero(g.mask) + 1 << ")";
      } else {
        os << (g.negated ? "(nxor" : "(xor");
        for (int i = 0; i < g.n; ++i)
          if ((g.mask >> i) & 1) os << ' ' << i + 1;
        os << ")";
      }
      break;
    case GateKind::Ltf:
      os << "(ltf (";
      for (int i = 0; i < g.n; ++i) os << (i ? " " : "") << g.weights[i];
      os << ") " << g.threshold << ")";
      break;
    case GateKind::Sym:
      os << "(sym";
      for (auto b : g.spectrum) os << ' ' << int(b);
      os << ")";
      break;
    case GateKind::Table: {
      std::size_t bits = g.table.size();
      std::size_t digits = std::max<std::size_t>(1, bits / 4);
      std::string hex(digits, '0');
      for (std::size_t d = 0; d < digits; ++d) {
        int v = 0;
        for (int b = 0; b < 4; ++b) {
          std::size_t idx = d * 4 + b;
          if (idx < bits && g.table[idx]) v |= 1 << b;
        }
        hex[digits - 1 - d] = "0123456789abcdef"[v];
      }
      os << "(table " << hex << ")";
      break;
    }
  }
  return os.str();
}

std::string unparse(const Formula& f) {
  std::vector<std::string> s(f.nodes().size());
  for (std::size_t i = 0; i < f.nodes().size(); ++i) {
    const Node& nd = f.nodes()[i];
    switch (nd.kind) {
      case NodeKind::Leaf: s[i] = unparse_gate(f.leaves()[nd.leaf]); break;
      case NodeKind::Not: s[i] = "(not " + s[nd.left] + ")"; break;
      case NodeKind::And: s[i] = "(and " + s[nd.left] + " " + s[nd.right] + ")"; break;
      case NodeKind::Or: s[i] = "(or " + s[nd.left] + " " + s[nd.right] + ")"; break;
    }
  }
  return s[f.root()];
}

// ---------------------------------------------------------------- random instances

GateClass parse_gate_class(std::string_view name) {
  if (name == "var") return GateClass::Var;
  if (name == "xor") return GateClass::Xor;
  if (name == "ltf") return GateClass::Ltf;
  if (name == "sym") return GateClass::Sym;
  if (name == "table") return GateClass::Table;
  if (name == "mixed") return GateClass::Mixed;
  throw ValidationError("unknown gate class '" + std::string(name) + "'");
}

LeafGate random_gate(int n, GateClass gc, Rng& rng) {
  if (gc == GateClass::Mixed) {
    static constexpr GateClass kinds[] = {GateClass::Xor, GateClass::Ltf, GateClass::Sym};
    gc = kinds[rng.below(3)];
  }
  switch (gc) {
    case GateClass::Var:
      return LeafGate::var(n, static_cast<int>(rng.below(n)), rng.bit());
    case GateClass::Xor:
      return LeafGate::xor_mask(n, rng.next() & low_mask(n), rng.bit());
    case GateClass::Ltf: {
      std::vector<std::int64_t> w(n);
      std::int64_t lo = 0, hi = 0;
      for (auto& wi : w) {
        wi = static_cast<std::int64_t>(rng.below(7)) - 3;
        (wi < 0 ? lo : hi) += wi;
      }
      std::int64_t theta = lo + 1 + static_cast<std::int64_t>(rng.below(static_cast<u64>(std::max<std::int64_t>(1, hi - lo))));
      return LeafGate::ltf(std::move(w), theta);
    }
    case GateClass::Sym: {
      std::vector<std::uint8_t> b(n + 1);
      for (auto& v : b) v = rng.bit();
      return LeafGate::sym(std::move(b));
    }
    case GateClass::Table: {
      if (n > 24) throw ValidationError("table gates are limited to n <= 24");
      std::vector<std::uint8_t> t(std::size_t{1} << n);
      for (auto& v : t) v = rng.bit();
      return LeafGate::truth_table(n, std::move(t));
    }
    case GateClass::Mixed:
      break;
  }
  return LeafGate::xor_mask(n, 0);
}

Formula random_formula(int n, int s, GateClass gate_class, u64 seed) {
  if (s < 1) throw ValidationError("formula size must be at least 1");
  if (n < 1 || n > 64) throw ValidationError("number of variables must be in 1..64");
  Rng rng(seed);
  // Remy's algorithm on a plane binary tree: node 0 is the first leaf.
  struct T {
    int l = -1, r = -1, parent = -1;
  };
  std::vector<T> t(1);
  int root = 0;
  for (int k = 1; k < s; ++k) {
    int pick = static_cast<int>(rng.below(t.size()));
    int inner = static_cast<int>(t.size());
    int leaf = inner + 1;
    t.push_back({});
    t.push_back({});
    int par = t[pick].parent;
    if (par == -1) root = inner;
    else if (t[par].l == pick) t[par].l = inner;
    else t[par].r = inner;
    t[inner].parent = par;
    if (rng.bit()) {
      t[inner].l = pick;
      t[inner].r = leaf;
    } else {
      t[inner].l = leaf;
      t[inner].r = pick;
    }
    t[pick].parent = inner;
    t[leaf].parent = inner;
  }
  std::vector<Node> nodes;
  std::vector<LeafGate> leaves;
  std::function<int(int)> emit = [&](int v) -> int {
    int id;
    if (t[v].l == -1) {
      leaves.push_back(random_gate(n, gate_class, rng));
      nodes.push_back(Node{NodeKind::Leaf, -1, -1, static_cast<int>(leaves.size()) - 1});
      id = static_cast<int>(nodes.size()) - 1;
    } else {
      int l = emit(t[v].l);
      int r = emit(t[v].r);
      nodes.push_back(Node{rng.bit() ? NodeKind::And : NodeKind::Or, l, r, -1});
      id = static_cast<int>(nodes.size()) - 1;
      if (rng.below(4) == 0) {
        nodes.push_back(Node{NodeKind::Not, id, -1, -1});
        id = static_cast<int>(nodes.size()) - 1;
      }
    }
    return id;
  };
  int r = emit(root);
  return Formula(n, std::move(leaves), std::move(nodes), r);
}

// ---------------------------------------------------------------- decomposition

namespace {

struct Work {
  NodeKind kind;
  int l = -1, r = -1;
  Slot slot;
};

/// Copies the subtree at v into a fresh post-ordered skeleton.
Skeleton extract(const std::vector<Work>& w, int v) {
  Skeleton sk;
  std::function<int(int)> rec = [&](int u) -> int {
    const Work& x = w[u];
    Node nd;
    nd.kind = x.kind;
    if (x.kind == NodeKind::Leaf) {
      nd.leaf = sk.arity();
      sk.slots.push_back(x.slot);
    } else {
      nd.left = rec(x.l);
      if (x.kind != NodeKind::Not) nd.right = rec(x.r);
    }
    sk.nodes.push_back(nd);
    return static_cast<int>(sk.nodes.size()) - 1;
  };
  sk.root = rec(v);
  return sk;
}

}  // namespace

CompositionTree decompose(const Skeleton& input, int t) {
  if (t < 1 || t > std::max(1, input.arity())) throw ValidationError("decomposition threshold must be in 1..size");
  std::vector<Work> w(input.nodes.size());
  for (std::size_t i = 0; i < input.nodes.size(); ++i) {
    const Node& nd = input.nodes[i];
    w[i].kind = nd.kind;
    w[i].l = nd.left;
    w[i].r = nd.right;
    if (nd.kind == NodeKind::Leaf) w[i].slot = input.slots[nd.leaf];
  }
  int root = input.root;
  CompositionTree ct;
  ct.threshold = t;
  ct.num_leaves = input.arity();
  std::vector<int> count(w.size());
  while (true) {
    // Pre-order walk, left first; the first node of maximum depth wins ties.
    int best = -1, best_depth = -1;
    std::function<int(int, int)> walk = [&](int v, int depth) -> int {
      const Work& x = w[v];
      int c;
      if (x.kind == NodeKind::Leaf) c = 1;
      else if (x.kind == NodeKind::Not) c = walk(x.l, depth + 1);
      else {
        int a = walk(x.l, depth + 1);
        c = a + walk(x.r, depth + 1);
      }
      count[v] = c;
      bool eligible = c >= t && !(x.kind == NodeKind::Leaf && x.slot.placeholder);
      if (eligible && depth > best_depth) {
        best = v;
        best_depth = depth;
      }
      return c;
    };
    walk(root, 0);
    if (best == -1) break;
    int id = static_cast<int>(ct.pieces.size());
    ct.pieces.push_back(Piece{id, extract(w, best)});
    w[best] = Work{NodeKind::Leaf, -1, -1, Slot{true, id}};
  }
  ct.top = extract(w, root);
  return ct;
}

CompositionTree decompose(const Formula& f, int t) { return decompose(f.skeleton(), t); }

bool CompositionTree::eval(const std::vector<std::uint8_t>& leaf_values) const {
  std::vector<std::uint8_t> ph(pieces.size());
  auto inputs = [&](const Skeleton& sk) {
    std::vector<std::uint8_t> v(sk.slots.size());
    for (std::size_t i = 0; i < sk.slots.size(); ++i)
      v[i] = sk.slots[i].placeholder ? ph[sk.slots[i].index] : leaf_values[sk.slots[i].index];
    return v;
  };
  for (const Piece& p : pieces) ph[p.placeholder] = p.body.eval(inputs(p.body));
  return top.eval(inputs(top));
}

Skeleton CompositionTree::recompose() const {
  Skeleton out;
  std::function<int(const Skeleton&, int)> rec = [&](const Skeleton& sk, int v) -> int {
    const Node& nd = sk.nodes[v];
    Node copy = nd;
    if (nd.kind == NodeKind::Leaf) {
      const Slot& s = sk.slots[nd.leaf];
      if (s.placeholder) {
        const Skeleton& body = pieces[s.index].body;
        return rec(body, body.root);
      }
      copy.leaf = out.arity();
      out.slots.push_back(s);
    } else {
      copy.left = rec(sk, nd.left);
      if (nd.kind != NodeKind::Not) copy.right = rec(sk, nd.right);
    }
    out.nodes.push_back(copy);
    return static_cast<int>(out.nodes.size()) - 1;
  };
  out.root = rec(top, top.root);
  return out;
}

}  // namespace leafcomm
