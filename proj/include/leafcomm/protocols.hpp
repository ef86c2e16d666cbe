/*! \file protocols.hpp
  \brief Deterministic and randomized communication protocols for leaf gates.

  A protocol is given intensionally: a state machine whose internal states are
  owned by a party and whose message depends on the owner's block of the input.
  ProtocolTree is the extensional form with one message table per node.
  Parties hold contiguous blocks; in the two-party split Alice holds the first
  ceil(n/2) bits.
*/
#pragma once

#include "leafcomm/common.hpp"
#include "leafcomm/formula.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace leafcomm {

using Transcript = std::vector<std::uint8_t>;
using ProtocolState = std::vector<std::int64_t>;
using RandomString = std::vector<std::uint8_t>;

struct PartyLayout {
  int n = 0;
  std::vector<int> offsets;
  std::vector<int> sizes;

  static PartyLayout two_party(int n);
  /// k contiguous blocks of n/k bits; k must divide n.
  static PartyLayout nih(int n, int k);

  int parties() const { return static_cast<int>(sizes.size()); }
  u64 block(u64 x, int party) const { return (x >> offsets[party]) & low_mask(sizes[party]); }
  bool operator==(const PartyLayout& o) const = default;
};

struct NodeInfo {
  bool leaf = true;
  int owner = -1;
  bool output = false;
};

class Protocol {
 public:
  explicit Protocol(PartyLayout layout) : layout_(std::move(layout)) {}
  virtual ~Protocol() = default;

  const PartyLayout& layout() const { return layout_; }
  int parties() const { return layout_.parties(); }

  /// Declared cost: an upper bound on every transcript length.
  virtual int cost() const = 0;
  virtual ProtocolState root() const = 0;
  virtual NodeInfo node(const ProtocolState& s) const = 0;
  /// Messages may depend on a block only through its class (e.g. a partial sum).
  virtual std::int64_t input_class(int party, u64 block_input) const;
  virtual bool message(const ProtocolState& s, std::int64_t owner_class) const = 0;
  virtual ProtocolState advance(const ProtocolState& s, bool bit) const = 0;
  virtual std::string name() const = 0;

  /// Runs on a full input; optionally records the transcript.
  bool run(u64 x, Transcript* transcript = nullptr) const;

 private:
  PartyLayout layout_;
};

using ProtocolPtr = std::shared_ptr<const Protocol>;

/// Extensional protocol: each internal node stores the owner's message table.
class ProtocolTree : public Protocol {
 public:
  struct TreeNode {
    bool leaf = true;
    int owner = -1;
    std::vector<std::uint8_t> table;  // message for each owner block input
    int child[2] = {-1, -1};          // -1: no input reaches that branch
    bool output = false;
  };

  ProtocolTree(PartyLayout layout, std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const;

  int cost() const override { return depth(); }
  ProtocolState root() const override { return {0}; }
  NodeInfo node(const ProtocolState& s) const override;
  bool message(const ProtocolState& s, std::int64_t owner_class) const override;
  ProtocolState advance(const ProtocolState& s, bool bit) const override;
  std::string name() const override { return "tree"; }

  bool operator==(const ProtocolTree& o) const;

 private:
  std::vector<TreeNode> nodes_;
};

/// Materializes reachable nodes; every block must have at most 16 bits.
ProtocolTree materialize(const Protocol& p);

struct Rectangle {
  Transcript transcript;
  std::vector<std::vector<u64>> sides;  // sorted block inputs per party
  bool output = false;
};

/// One rectangle per reachable transcript; they partition the input space.
std::vector<Rectangle> enumerate_leaves(const Protocol& p);

/// Whether the party's block is consistent with its own messages along the transcript.
bool rectangle_membership(const Protocol& p, int party, u64 block_input, const Transcript& transcript);

// ---------------------------------------------------------------- concrete protocols

ProtocolPtr constant_protocol(int n, bool value);
/// Alice sends her masked parity, Bob answers with the gate value.
ProtocolPtr xor_protocol(const LeafGate& gate);
/// Each party announces its block weight in ceil(log2(n/k + 1)) bits.
ProtocolPtr sym_nih_protocol(const LeafGate& gate, int k);
/// Alice sends her whole block, Bob answers with the gate value.
ProtocolPtr table_protocol(const LeafGate& gate);
/// Random tree of exact depth `cost` with random owners, tables and outputs.
ProtocolTree random_protocol_tree(int n, int cost, Rng& rng);

// ---------------------------------------------------------------- randomized protocols

class RandomizedProtocol {
 public:
  virtual ~RandomizedProtocol() = default;
  virtual const PartyLayout& layout() const = 0;
  virtual int randomness_bits() const = 0;
  virtual Rational error_bound() const = 0;
  virtual int cost() const = 0;
  virtual ProtocolPtr sample(const RandomString& r) const = 0;
  virtual std::string name() const = 0;
};

using RandomizedPtr = std::shared_ptr<const RandomizedProtocol>;

ProtocolPtr sample_deterministic(const RandomizedProtocol& rp, const RandomString& r);

RandomString random_string(int bits, Rng& rng);
/// Low `bits` bits of v, least significant first.
RandomString random_string_from(u64 v, int bits);

/// Zero randomness, zero error.
RandomizedPtr as_randomized(ProtocolPtr p);

struct LtfProtocolParams {
  std::int64_t offset = 0;   // u = a + offset, v = threshold - b + offset, both in [0, 2^L)
  int bits = 0;              // L
  int rounds = 0;            // binary-search rounds over the common prefix length
  int fingerprints = 0;      // R inner-product bits per round
  bool constant = false;
  bool constant_value = false;
};

/*! \brief Greater-than on the shared sum by binary search with inner-product fingerprints.

  Alice holds a = sum of her weighted bits, Bob holds b. The players search for
  the longest common prefix of u and v; every equality test costs R bits from
  Alice and one answer bit from Bob. Finally Alice announces her bit at the first
  difference. Two-party only.
*/
RandomizedPtr ltf_randomized_protocol(const LeafGate& gate, const Rational& delta);
LtfProtocolParams ltf_protocol_params(const LeafGate& gate, const Rational& delta);

/// Majority of `reps` independent runs (ties output 0); error bound is the exact binomial tail.
RandomizedPtr majority_protocol(RandomizedPtr base, int reps);
/// 18 * ceil(ln(1/eps)) repetitions; returns `base` unchanged when its error is already <= eps.
RandomizedPtr reduce_error(RandomizedPtr base, const Rational& eps);
int majority_repetitions(const Rational& eps);

/// Exact Pr[Bin(r, p) >= ceil(r/2)].
Rational binomial_upper_tail(int r, const Rational& p);

/// Fraction of random strings on which the protocol errs at x (r <= 20).
Rational exact_error_at(const RandomizedProtocol& rp, const std::function<bool(u64)>& f, u64 x);

/// Protocol for a leaf gate over n inputs: XOR and Table get deterministic ones,
/// SYM uses the k = 2 number-in-hand protocol, LTF the fingerprint protocol at delta.
RandomizedPtr protocol_for_gate(const LeafGate& gate, const Rational& delta);

}  // namespace leafcomm
