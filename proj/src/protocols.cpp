#include "leafcomm/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace leafcomm {

PartyLayout PartyLayout::two_party(int n) {
  if (n < 0) throw ValidationError("negative input length");
  int a = (n + 1) / 2;
  return PartyLayout{n, {0, a}, {a, n - a}};
}

PartyLayout PartyLayout::nih(int n, int k) {
  if (k <= 0 || n % k != 0) throw ValidationError("number of parties must divide n");
  PartyLayout l{n, {}, {}};
  for (int p = 0; p < k; ++p) {
    l.offsets.push_back(p * (n / k));
    l.sizes.push_back(n / k);
  }
  return l;
}

std::int64_t Protocol::input_class(int, u64 block_input) const { return static_cast<std::int64_t>(block_input); }

bool Protocol::run(u64 x, Transcript* transcript) const {
  ProtocolState s = root();
  while (true) {
    NodeInfo info = node(s);
    if (info.leaf) return info.output;
    bool bit = message(s, input_class(info.owner, layout().block(x, info.owner)));
    if (transcript) transcript->push_back(bit);
    s = advance(s, bit);
  }
}

// ---------------------------------------------------------------- enumeration

namespace {

constexpr int kMaxEnumBlock = 20;

// Block inputs of one party grouped by class.
struct ClassGroups {
  std::vector<std::int64_t> value;
  std::vector<std::vector<u64>> members;
};

std::vector<ClassGroups> group_classes(const Protocol& p) {
  std::vector<ClassGroups> out(p.parties());
  for (int q = 0; q < p.parties(); ++q) {
    int size = p.layout().sizes[q];
    if (size > kMaxEnumBlock) throw ValidationError("party block too large to enumerate");
    std::map<std::int64_t, std::size_t> index;
    for (u64 y = 0; y < (u64{1} << size); ++y) {
      std::int64_t c = p.input_class(q, y);
      auto [it, fresh] = index.emplace(c, out[q].value.size());
      if (fresh) {
        out[q].value.push_back(c);
        out[q].members.emplace_back();
      }
      out[q].members[it->second].push_back(y);
    }
  }
  return out;
}

// Calls visit(state, transcript, sets, info) at every reachable node; sets hold class indices.
template <class Visit>
void walk(const Protocol& p, const std::vector<ClassGroups>& groups, const ProtocolState& s, Transcript& t,
          std::vector<std::vector<int>>& sets, Visit&& visit) {
  NodeInfo info = p.node(s);
  visit(s, t, sets, info);
  if (info.leaf) return;
  int q = info.owner;
  std::vector<int> part[2];
  for (int c : sets[q]) part[p.message(s, groups[q].value[c])].push_back(c);
  std::vector<int> saved = std::move(sets[q]);
  for (int bit = 0; bit < 2; ++bit) {
    if (part[bit].empty()) continue;
    sets[q] = std::move(part[bit]);
    t.push_back(static_cast<std::uint8_t>(bit));
    walk(p, groups, p.advance(s, bit), t, sets, visit);
    t.pop_back();
  }
  sets[q] = std::move(saved);
}

std::vector<std::vector<int>> all_classes(const std::vector<ClassGroups>& groups) {
  std::vector<std::vector<int>> sets(groups.size());
  for (std::size_t q = 0; q < groups.size(); ++q)
    for (std::size_t c = 0; c < groups[q].value.size(); ++c) sets[q].push_back(static_cast<int>(c));
  return sets;
}

}  // namespace

std::vector<Rectangle> enumerate_leaves(const Protocol& p) {
  std::vector<ClassGroups> groups = group_classes(p);
  std::vector<std::vector<int>> sets = all_classes(groups);
  std::vector<Rectangle> out;
  Transcript t;
  walk(p, groups, p.root(), t, sets,
       [&](const ProtocolState&, const Transcript& tr, const std::vector<std::vector<int>>& cur, const NodeInfo& info) {
         if (!info.leaf) return;
         Rectangle r;
         r.transcript = tr;
         r.output = info.output;
         for (std::size_t q = 0; q < cur.size(); ++q) {
           std::vector<u64> side;
           for (int c : cur[q]) side.insert(side.end(), groups[q].members[c].begin(), groups[q].members[c].end());
           std::sort(side.begin(), side.end());
           r.sides.push_back(std::move(side));
         }
         out.push_back(std::move(r));
       });
  return out;
}

bool rectangle_membership(const Protocol& p, int party, u64 block_input, const Transcript& transcript) {
  if (party < 0 || party >= p.parties()) throw ValidationError("unknown party");
  ProtocolState s = p.root();
  bool consistent = true;
  for (std::uint8_t bit : transcript) {
    NodeInfo info = p.node(s);
    if (info.leaf) throw ValidationError("unknown transcript: longer than its path");
    if (info.owner == party && p.message(s, p.input_class(party, block_input)) != (bit != 0)) consistent = false;
    s = p.advance(s, bit != 0);
  }
  if (!p.node(s).leaf) throw ValidationError("unknown transcript: does not end at a leaf");
  return consistent;
}

// ---------------------------------------------------------------- explicit trees

ProtocolTree::ProtocolTree(PartyLayout layout, std::vector<TreeNode> nodes)
    : Protocol(std::move(layout)), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("protocol tree needs a root");
  for (const TreeNode& nd : nodes_) {
    if (nd.leaf) continue;
    if (nd.owner < 0 || nd.owner >= parties()) throw ValidationError("node owner out of range");
    if (nd.table.size() != (std::size_t{1} << this->layout().sizes[nd.owner]))
      throw ValidationError("message table has the wrong length");
    for (int c : nd.child)
      if (c >= static_cast<int>(nodes_.size())) throw ValidationError("child index out of range");
  }
}

int ProtocolTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    best = std::max(best, d[v]);
    if (nodes_[v].leaf) continue;
    for (int c : nodes_[v].child)
      if (c >= 0) {
        d[c] = d[v] + 1;
        stack.push_back(c);
      }
  }
  return best;
}

NodeInfo ProtocolTree::node(const ProtocolState& s) const {
  const TreeNode& nd = nodes_.at(static_cast<std::size_t>(s[0]));
  return NodeInfo{nd.leaf, nd.owner, nd.output};
}

bool ProtocolTree::message(const ProtocolState& s, std::int64_t owner_class) const {
  return nodes_[static_cast<std::size_t>(s[0])].table.at(static_cast<std::size_t>(owner_class)) != 0;
}

ProtocolState ProtocolTree::advance(const ProtocolState& s, bool bit) const {
  int c = nodes_[static_cast<std::size_t>(s[0])].child[bit];
  if (c < 0) throw AssertionFailure("protocol tree: unreachable branch taken");
  return {c};
}

bool ProtocolTree::operator==(const ProtocolTree& o) const {
  if (!(layout() == o.layout()) || nodes_.size() != o.nodes_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& a = nodes_[i];
    const TreeNode& b = o.nodes_[i];
    if (a.leaf != b.leaf || a.owner != b.owner || a.table != b.table || a.child[0] != b.child[0] ||
        a.child[1] != b.child[1] || a.output != b.output)
      return false;
  }
  return true;
}

ProtocolTree materialize(const Protocol& p) {
  for (int size : p.layout().sizes)
    if (size > 16) throw ValidationError("message tables need blocks of at most 16 bits");
  std::vector<ClassGroups> groups = group_classes(p);
  std::vector<ProtocolTree::TreeNode> nodes;
  std::function<int(const ProtocolState&, std::vector<std::vector<int>>&)> build =
      [&](const ProtocolState& s, std::vector<std::vector<int>>& sets) -> int {
    NodeInfo info = p.node(s);
    int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (info.leaf) {
      nodes[id].output = info.output;
      return id;
    }
    int q = info.owner;
    std::vector<std::uint8_t> table(std::size_t{1} << p.layout().sizes[q]);
    std::vector<int> part[2];
    for (std::size_t c = 0; c < groups[q].value.size(); ++c) {
      bool m = p.message(s, groups[q].value[c]);
      for (u64 y : groups[q].members[c]) table[y] = m;
    }
    for (int c : sets[q]) part[table[groups[q].members[c][0]]].push_back(c);
    nodes[id].leaf = false;
    nodes[id].owner = q;
    nodes[id].table = std::move(table);
    std::vector<int> saved = std::move(sets[q]);
    for (int bit = 0; bit < 2; ++bit) {
      if (part[bit].empty()) continue;
      sets[q] = std::move(part[bit]);
      int c = build(p.advance(s, bit), sets);
      nodes[id].child[bit] = c;
    }
    sets[q] = std::move(saved);
    return id;
  };
  std::vector<std::vector<int>> sets = all_classes(groups);
  build(p.root(), sets);
  return ProtocolTree(p.layout(), std::move(nodes));
}

ProtocolTree random_protocol_tree(int n, int cost, Rng& rng) {
  PartyLayout layout = PartyLayout::two_party(n);
  std::vector<ProtocolTree::TreeNode> nodes;
  std::function<int(int)> build = [&](int depth) -> int {
    int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (depth == cost) {
      nodes[id].output = rng.bit();
      return id;
    }
    int owner = static_cast<int>(rng.below(2));
    std::vector<std::uint8_t> table(std::size_t{1} << layout.sizes[owner]);
    for (auto& b : table) b = rng.bit();
    nodes[id].leaf = false;
    nodes[id].owner = owner;
    nodes[id].table = std::move(table);
    int l = build(depth + 1);
    int r = build(depth + 1);
    nodes[id].child[0] = l;
    nodes[id].child[1] = r;
    return id;
  };
  build(0);
  return ProtocolTree(layout, std::move(nodes));
}

// ---------------------------------------------------------------- concrete protocols

namespace {

class ConstantProtocol : public Protocol {
 public:
  ConstantProtocol(int n, bool v) : Protocol(PartyLayout::two_party(n)), value_(v) {}
  int cost() const override { return 0; }
  ProtocolState root() const override { return {0}; }
  NodeInfo node(const ProtocolState&) const override { return NodeInfo{true, -1, value_}; }
  bool message(const ProtocolState&, std::int64_t) const override { return false; }
  ProtocolState advance(const ProtocolState& s, bool) const override { return s; }
  std::string name() const override { return "constant"; }

 private:
  bool value_;
};

class XorProtocol : public Protocol {
 public:
  explicit XorProtocol(const LeafGate& g) : Protocol(PartyLayout::two_party(g.n)), mask_(g.mask), negated_(g.negated) {}
  int cost() const override { return 2; }
  std::int64_t input_class(int party, u64 block) const override {
    return parity(block & layout().block(mask_, party));
  }
  // state: {step, first bit, second bit}
  ProtocolState root() const override { return {0, 0, 0}; }
  NodeInfo node(const ProtocolState& s) const override {
    if (s[0] == 2) return NodeInfo{true, -1, s[2] != 0};
    return NodeInfo{false, static_cast<int>(s[0]), false};
  }
  bool message(const ProtocolState& s, std::int64_t cls) const override {
    if (s[0] == 0) return cls != 0;
    return ((s[1] ^ cls) != 0) != negated_;
  }
  ProtocolState advance(const ProtocolState& s, bool bit) const override {
    ProtocolState t = s;
    t[1 + s[0]] = bit;
    ++t[0];
    return t;
  }
  std::string name() const override { return "xor"; }

 private:
  u64 mask_;
  bool negated_;
};

class SymProtocol : public Protocol {
 public:
  SymProtocol(const LeafGate& g, PartyLayout layout) : Protocol(std::move(layout)), spectrum_(g.spectrum) {
    int widest = 0;
    for (int s : this->layout().sizes) widest = std::max(widest, s);
    bits_ = ceil_log2(static_cast<u64>(widest) + 1);
  }
  int cost() const override { return parties() * bits_; }
  std::int64_t input_class(int, u64 block) const override { return popcount(block); }
  // state: {party, bit position, code so far, total weight}
  ProtocolState root() const override { return normalize({0, 0, 0, 0}); }
  NodeInfo node(const ProtocolState& s) const override {
    if (s[0] == parties()) {
      std::int64_t w = s[3];
      bool out = w < static_cast<std::int64_t>(spectrum_.size()) && spectrum_[static_cast<std::size_t>(w)];
      return NodeInfo{true, -1, out};
    }
    return NodeInfo{false, static_cast<int>(s[0]), false};
  }
  bool message(const ProtocolState& s, std::int64_t cls) const override { return (cls >> s[1]) & 1; }
  ProtocolState advance(const ProtocolState& s, bool bit) const override {
    ProtocolState t = s;
    t[2] |= static_cast<std::int64_t>(bit) << s[1];
    ++t[1];
    return normalize(t);
  }
  std::string name() const override { return "sym"; }

 private:
  ProtocolState normalize(ProtocolState t) const {
    while (t[0] < parties() && t[1] == bits_) {
      t[3] += t[2];
      t[2] = 0;
      t[1] = 0;
      ++t[0];
    }
    return t;
  }
  std::vector<std::uint8_t> spectrum_;
  int bits_ = 0;
};

class TableProtocol : public Protocol {
 public:
  explicit TableProtocol(const LeafGate& g) : Protocol(PartyLayout::two_party(g.n)), gate_(g) {}
  int cost() const override { return layout().sizes[0] + 1; }
  // state: {position, Alice's block so far, output}
  ProtocolState root() const override { return {0, 0, 0}; }
  NodeInfo node(const ProtocolState& s) const override {
    int a = layout().sizes[0];
    if (s[0] < a) return NodeInfo{false, 0, false};
    if (s[0] == a) return NodeInfo{false, 1, false};
    return NodeInfo{true, -1, s[2] != 0};
  }
  bool message(const ProtocolState& s, std::int64_t cls) const override {
    if (s[0] < layout().sizes[0]) return (cls >> s[0]) & 1;
    u64 x = static_cast<u64>(s[1]) | (static_cast<u64>(cls) << layout().offsets[1]);
    return gate_.eval(x);
  }
  ProtocolState advance(const ProtocolState& s, bool bit) const override {
    ProtocolState t = s;
    if (s[0] < layout().sizes[0]) t[1] |= static_cast<std::int64_t>(bit) << s[0];
    else t[2] = bit;
    ++t[0];
    return t;
  }
  std::string name() const override { return "table"; }

 private:
  LeafGate gate_;
};

}  // namespace

ProtocolPtr constant_protocol(int n, bool value) { return std::make_shared<ConstantProtocol>(n, value); }

ProtocolPtr xor_protocol(const LeafGate& gate) {
  if (gate.kind != GateKind::Xor) throw ValidationError("xor_protocol needs an XOR gate");
  return std::make_shared<XorProtocol>(gate);
}

ProtocolPtr sym_nih_protocol(const LeafGate& gate, int k) {
  if (gate.kind != GateKind::Sym) throw ValidationError("sym_nih_protocol needs a SYM gate");
  return std::make_shared<SymProtocol>(gate, PartyLayout::nih(gate.n, k));
}

ProtocolPtr table_protocol(const LeafGate& gate) { return std::make_shared<TableProtocol>(gate); }

// ---------------------------------------------------------------- randomized protocols

ProtocolPtr sample_deterministic(const RandomizedProtocol& rp, const RandomString& r) {
  if (static_cast<int>(r.size()) != rp.randomness_bits())
    throw ValidationError("random string has the wrong length");
  return rp.sample(r);
}

RandomString random_string(int bits, Rng& rng) {
  RandomString r(static_cast<std::size_t>(bits));
  for (auto& b : r) b = rng.bit();
  return r;
}

RandomString random_string_from(u64 v, int bits) {
  RandomString r(static_cast<std::size_t>(bits));
  for (int i = 0; i < bits; ++i) r[i] = (v >> i) & 1;
  return r;
}

namespace {

class Derandomized : public RandomizedProtocol {
 public:
  explicit Derandomized(ProtocolPtr p) : p_(std::move(p)) {}
  const PartyLayout& layout() const override { return p_->layout(); }
  int randomness_bits() const override { return 0; }
  Rational error_bound() const override { return 0; }
  int cost() const override { return p_->cost(); }
  ProtocolPtr sample(const RandomString&) const override { return p_; }
  std::string name() const override { return p_->name(); }

 private:
  ProtocolPtr p_;
};

class LtfFixed : public Protocol {
 public:
  LtfFixed(const LeafGate& g, const LtfProtocolParams& prm, std::vector<u64> vectors)
      : Protocol(PartyLayout::two_party(g.n)), weights_(g.weights), threshold_(g.threshold), prm_(prm),
        vectors_(std::move(vectors)) {}

  int cost() const override { return prm_.constant ? 0 : prm_.rounds * (prm_.fingerprints + 1) + 1; }
  std::int64_t input_class(int party, u64 block) const override {
    std::int64_t sum = 0;
    int off = layout().offsets[party];
    for (int i = 0; i < layout().sizes[party]; ++i)
      if ((block >> i) & 1) sum += weights_[off + i];
    return sum;
  }
  // state: {lo, hi, step, fingerprint bits, done, output}
  ProtocolState root() const override {
    if (prm_.constant) return {0, 0, 0, 0, 1, prm_.constant_value};
    return {0, prm_.bits, 0, 0, 0, 0};
  }
  NodeInfo node(const ProtocolState& s) const override {
    if (s[4]) return NodeInfo{true, -1, s[5] != 0};
    if (s[0] < s[1]) return NodeInfo{false, s[2] < prm_.fingerprints ? 0 : 1, false};
    return NodeInfo{false, 0, false};
  }
  bool message(const ProtocolState& s, std::int64_t cls) const override {
    const int L = prm_.bits;
    if (s[0] < s[1]) {
      int mid = static_cast<int>((s[0] + s[1] + 1) / 2);
      if (s[2] < prm_.fingerprints) {
        u64 u = static_cast<u64>(cls + prm_.offset);
        return fingerprint(static_cast<int>(s[2]), mid, u >> (L - mid));
      }
      u64 v = static_cast<u64>(threshold_ - cls + prm_.offset);
      for (int j = 0; j < prm_.fingerprints; ++j)
        if (fingerprint(j, mid, v >> (L - mid)) != (((s[3] >> j) & 1) != 0)) return false;
      return true;
    }
    if (s[0] == L) return true;
    u64 u = static_cast<u64>(cls + prm_.offset);
    return (u >> (L - 1 - s[0])) & 1;
  }
  ProtocolState advance(const ProtocolState& s, bool bit) const override {
    ProtocolState t = s;
    if (s[0] < s[1]) {
      if (s[2] < prm_.fingerprints) {
        t[3] |= static_cast<std::int64_t>(bit) << s[2];
        ++t[2];
      } else {
        std::int64_t mid = (s[0] + s[1] + 1) / 2;
        if (bit) t[0] = mid;
        else t[1] = mid - 1;
        t[2] = 0;
        t[3] = 0;
      }
    } else {
      t[4] = 1;
      t[5] = bit;
    }
    return t;
  }
  std::string name() const override { return "ltf"; }

 private:
  bool fingerprint(int j, int len, u64 prefix) const { return parity(prefix & vectors_[j] & low_mask(len)); }

  std::vector<std::int64_t> weights_;
  std::int64_t threshold_;
  LtfProtocolParams prm_;
  std::vector<u64> vectors_;
};

class LtfRandomized : public RandomizedProtocol {
 public:
  LtfRandomized(const LeafGate& g, const Rational& delta)
      : gate_(g), layout_(PartyLayout::two_party(g.n)), prm_(ltf_protocol_params(g, delta)) {}
  const PartyLayout& layout() const override { return layout_; }
  int randomness_bits() const override { return prm_.constant ? 0 : prm_.fingerprints * prm_.bits; }
  Rational error_bound() const override {
    if (prm_.constant) return 0;
    Rational e(prm_.rounds);
    for (int j = 0; j < prm_.fingerprints; ++j) e /= 2;
    return e > 1 ? Rational(1) : e;
  }
  int cost() const override { return prm_.constant ? 0 : prm_.rounds * (prm_.fingerprints + 1) + 1; }
  ProtocolPtr sample(const RandomString& r) const override {
    std::vector<u64> vectors(static_cast<std::size_t>(prm_.fingerprints), 0);
    if (!prm_.constant)
      for (int j = 0; j < prm_.fingerprints; ++j)
        for (int t = 0; t < prm_.bits; ++t)
          if (r[static_cast<std::size_t>(j * prm_.bits + t)]) vectors[j] |= u64{1} << t;
    return std::make_shared<LtfFixed>(gate_, prm_, std::move(vectors));
  }
  std::string name() const override { return "ltf"; }
  const LtfProtocolParams& params() const { return prm_; }

 private:
  LeafGate gate_;
  PartyLayout layout_;
  LtfProtocolParams prm_;
};

class SequentialMajority : public Protocol {
 public:
  explicit SequentialMajority(std::vector<ProtocolPtr> subs)
      : Protocol(subs.front()->layout()), subs_(std::move(subs)) {}
  int cost() const override {
    int c = 0;
    for (const auto& p : subs_) c += p->cost();
    return c;
  }
  // Copies of one family share their class map.
  std::int64_t input_class(int party, u64 block) const override { return subs_[0]->input_class(party, block); }
  // state: {copy index, ones, sub-state...}
  ProtocolState root() const override {
    ProtocolState s{0, 0};
    ProtocolState r = subs_[0]->root();
    s.insert(s.end(), r.begin(), r.end());
    return normalize(std::move(s));
  }
  NodeInfo node(const ProtocolState& s) const override {
    if (s[0] == static_cast<std::int64_t>(subs_.size())) return NodeInfo{true, -1, 2 * s[1] > s[0]};
    return subs_[s[0]]->node(sub_state(s));
  }
  bool message(const ProtocolState& s, std::int64_t cls) const override {
    return subs_[s[0]]->message(sub_state(s), cls);
  }
  ProtocolState advance(const ProtocolState& s, bool bit) const override {
    ProtocolState next = subs_[s[0]]->advance(sub_state(s), bit);
    ProtocolState t{s[0], s[1]};
    t.insert(t.end(), next.begin(), next.end());
    return normalize(std::move(t));
  }
  std::string name() const override { return "majority"; }

 private:
  static ProtocolState sub_state(const ProtocolState& s) { return ProtocolState(s.begin() + 2, s.end()); }
  ProtocolState normalize(ProtocolState s) const {
    while (s[0] < static_cast<std::int64_t>(subs_.size())) {
      NodeInfo info = subs_[s[0]]->node(sub_state(s));
      if (!info.leaf) break;
      s[1] += info.output;
      ++s[0];
      s.resize(2);
      if (s[0] < static_cast<std::int64_t>(subs_.size())) {
        ProtocolState r = subs_[s[0]]->root();
        s.insert(s.end(), r.begin(), r.end());
      }
    }
    return s;
  }
  std::vector<ProtocolPtr> subs_;
};

class MajorityRandomized : public RandomizedProtocol {
 public:
  MajorityRandomized(RandomizedPtr base, int reps) : base_(std::move(base)), reps_(reps) {
    if (reps <= 0) throw ValidationError("repetition count must be positive");
    error_ = binomial_upper_tail(reps_, base_->error_bound());
  }
  const PartyLayout& layout() const override { return base_->layout(); }
  int randomness_bits() const override { return reps_ * base_->randomness_bits(); }
  Rational error_bound() const override { return error_; }
  int cost() const override { return reps_ * base_->cost(); }
  ProtocolPtr sample(const RandomString& r) const override {
    int b = base_->randomness_bits();
    std::vector<ProtocolPtr> subs;
    for (int i = 0; i < reps_; ++i)
      subs.push_back(base_->sample(RandomString(r.begin() + i * b, r.begin() + (i + 1) * b)));
    return std::make_shared<SequentialMajority>(std::move(subs));
  }
  std::string name() const override { return "majority(" + base_->name() + ")"; }

 private:
  RandomizedPtr base_;
  int reps_;
  Rational error_;
};

}  // namespace

RandomizedPtr as_randomized(ProtocolPtr p) { return std::make_shared<Derandomized>(std::move(p)); }

LtfProtocolParams ltf_protocol_params(const LeafGate& gate, const Rational& delta) {
  if (gate.kind != GateKind::Ltf) throw ValidationError("ltf protocol needs an LTF gate");
  if (delta <= 0) throw ValidationError("delta must be positive");
  PartyLayout l = PartyLayout::two_party(gate.n);
  std::int64_t lo[2] = {0, 0}, hi[2] = {0, 0};
  for (int q = 0; q < 2; ++q)
    for (int i = 0; i < l.sizes[q]; ++i) {
      std::int64_t w = gate.weights[l.offsets[q] + i];
      (w < 0 ? lo[q] : hi[q]) += w;
    }
  LtfProtocolParams prm;
  if (lo[0] + lo[1] >= gate.threshold || hi[0] + hi[1] < gate.threshold) {
    prm.constant = true;
    prm.constant_value = lo[0] + lo[1] >= gate.threshold;
    return prm;
  }
  std::int64_t least = std::min(lo[0], gate.threshold - hi[1]);
  prm.offset = least < 0 ? -least : 0;
  std::int64_t top = std::max(hi[0], gate.threshold - lo[1]) + prm.offset;
  prm.bits = 64 - std::countl_zero(static_cast<u64>(top));
  if (prm.bits > 62) throw ValidationError("LTF weights too large for the fingerprint protocol");
  prm.rounds = ceil_log2(static_cast<u64>(prm.bits) + 1);
  Rational bound(prm.rounds);
  while (bound > delta) {
    bound /= 2;
    ++prm.fingerprints;
  }
  if (prm.fingerprints > 62) throw ValidationError("delta too small for the fingerprint protocol");
  return prm;
}

RandomizedPtr ltf_randomized_protocol(const LeafGate& gate, const Rational& delta) {
  return std::make_shared<LtfRandomized>(gate, delta);
}

Rational binomial_upper_tail(int r, const Rational& p) {
  Rational total = 0;
  BigInt c = 1;  // C(r, i)
  std::vector<Rational> pw(r + 1, Rational(1)), qw(r + 1, Rational(1));
  for (int i = 1; i <= r; ++i) {
    pw[i] = pw[i - 1] * p;
    qw[i] = qw[i - 1] * (1 - p);
  }
  for (int i = 0; i <= r; ++i) {
    if (2 * i >= r) total += Rational(c) * pw[i] * qw[r - i];
    c = c * (r - i) / (i + 1);
  }
  return total;
}

int majority_repetitions(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw ValidationError("error target must lie in (0, 1)");
  return 18 * static_cast<int>(std::ceil(std::log(1.0 / eps.get_d()) - 1e-12));
}

RandomizedPtr majority_protocol(RandomizedPtr base, int reps) {
  return std::make_shared<MajorityRandomized>(std::move(base), reps);
}

RandomizedPtr reduce_error(RandomizedPtr base, const Rational& eps) {
  if (base->error_bound() <= eps) return base;
  return majority_protocol(std::move(base), majority_repetitions(eps));
}

Rational exact_error_at(const RandomizedProtocol& rp, const std::function<bool(u64)>& f, u64 x) {
  int r = rp.randomness_bits();
  if (r > 20) throw ValidationError("too many random bits for exact enumeration");
  u64 wrong = 0;
  bool want = f(x);
  for (u64 v = 0; v < (u64{1} << r); ++v)
    wrong += rp.sample(random_string_from(v, r))->run(x) != want;
  return frac(BigInt(static_cast<unsigned long>(wrong)), BigInt(1) << r);
}

RandomizedPtr protocol_for_gate(const LeafGate& gate, const Rational& delta) {
  switch (gate.kind) {
    case GateKind::Xor:
      return as_randomized(xor_protocol(gate));
    case GateKind::Sym:
      return as_randomized(std::make_shared<SymProtocol>(gate, PartyLayout::two_party(gate.n)));
    case GateKind::Ltf:
      return ltf_randomized_protocol(gate, delta);
    case GateKind::Table:
      return as_randomized(table_protocol(gate));
  }
  throw AssertionFailure("unknown gate kind");
}

}  // namespace leafcomm
