#include "leafcomm/protocols.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace leafcomm;

namespace {

bool contains(const std::vector<u64>& side, u64 v) { return std::binary_search(side.begin(), side.end(), v); }

// Every input lies in exactly one rectangle, sizes add up to 2^n, and each
// rectangle's output is the protocol's output on its members.
void check_partition(const Protocol& p, const std::vector<Rectangle>& rects) {
  const PartyLayout& l = p.layout();
  BigInt volume = 0;
  for (const Rectangle& r : rects) {
    BigInt v = 1;
    for (const auto& side : r.sides) v *= static_cast<unsigned long>(side.size());
    volume += v;
  }
  EXPECT_EQ(volume, BigInt(1) << l.n);
  for (u64 x = 0; x < (u64{1} << l.n); ++x) {
    int hits = 0;
    for (const Rectangle& r : rects) {
      bool in = true;
      for (int q = 0; q < l.parties(); ++q) in = in && contains(r.sides[q], l.block(x, q));
      if (in) {
        ++hits;
        ASSERT_EQ(r.output, p.run(x)) << "x=" << x;
      }
    }
    ASSERT_EQ(hits, 1) << "x=" << x;
  }
}

void check_computes(const Protocol& p, const LeafGate& g) {
  for (u64 x = 0; x < (u64{1} << g.n); ++x) ASSERT_EQ(p.run(x), g.eval(x)) << "x=" << x;
}

LeafGate spectrum_gate(std::vector<std::uint8_t> spec) { return LeafGate::sym(std::move(spec)); }

}  // namespace

TEST(XorProtocol, TwoBitsGiveFourRectangles) {
  ProtocolPtr p = xor_protocol(LeafGate::xor_mask(2, 0b11));
  std::vector<Rectangle> rects = enumerate_leaves(*p);
  ASSERT_EQ(rects.size(), 4u);
  EXPECT_EQ(rects[0].transcript, (Transcript{0, 0}));
  EXPECT_EQ(rects[0].sides[0], std::vector<u64>{0});
  EXPECT_EQ(rects[0].sides[1], std::vector<u64>{0});
  EXPECT_FALSE(rects[0].output);
  check_partition(*p, rects);
  EXPECT_EQ(materialize(*p).depth(), 2);
  EXPECT_EQ(p->cost(), 2);
}

TEST(XorProtocol, MaskOnOneSide) {
  LeafGate g = LeafGate::xor_mask(4, 0b0011);
  ProtocolPtr p = xor_protocol(g);
  std::vector<Rectangle> rects = enumerate_leaves(*p);
  EXPECT_LE(rects.size(), 4u);
  check_partition(*p, rects);
  check_computes(*p, g);
}

TEST(XorProtocol, NegatedEmptyMaskIsConstantOne) {
  ProtocolPtr p = xor_protocol(LeafGate::xor_mask(4, 0, true));
  for (const Rectangle& r : enumerate_leaves(*p)) EXPECT_TRUE(r.output);
}

TEST(XorProtocol, CorrectOnRandomMasks) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(rng.below(12));
    LeafGate g = LeafGate::xor_mask(n, rng.next() & low_mask(n), rng.bit());
    ProtocolPtr p = xor_protocol(g);
    check_computes(*p, g);
    check_partition(*p, enumerate_leaves(*p));
    EXPECT_EQ(materialize(*p).depth(), 2);
  }
}

TEST(SymProtocol, MajorityOnFourBitsTwoParties) {
  LeafGate maj = spectrum_gate({0, 0, 1, 1, 1});
  ProtocolPtr p = sym_nih_protocol(maj, 2);
  check_computes(*p, maj);
  std::vector<Rectangle> rects = enumerate_leaves(*p);
  EXPECT_LE(rects.size(), std::size_t{1} << p->cost());
  check_partition(*p, rects);
  EXPECT_EQ(p->cost(), 2 * 2);
}

TEST(SymProtocol, ConstantSpectrum) {
  ProtocolPtr p = sym_nih_protocol(spectrum_gate({1, 1, 1, 1, 1, 1, 1}), 3);
  for (const Rectangle& r : enumerate_leaves(*p)) EXPECT_TRUE(r.output);
}

TEST(SymProtocol, ParitySpectrumMatchesXor) {
  LeafGate par = spectrum_gate({0, 1, 0, 1, 0, 1, 0, 1, 0});
  ProtocolPtr p = sym_nih_protocol(par, 4);
  LeafGate x = LeafGate::xor_mask(8, 0xff);
  for (u64 v = 0; v < 256; ++v) ASSERT_EQ(p->run(v), x.eval(v));
  EXPECT_EQ(p->cost(), 4 * 2);
  EXPECT_EQ(materialize(*p).depth(), p->cost());
  check_partition(*p, enumerate_leaves(*p));
}

TEST(SymProtocol, RandomSpectraAndPartyCounts) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    int k = 1 + static_cast<int>(rng.below(4));
    int n = k * (1 + static_cast<int>(rng.below(3)));
    std::vector<std::uint8_t> spec(n + 1);
    for (auto& b : spec) b = rng.bit();
    LeafGate g = spectrum_gate(spec);
    ProtocolPtr p = sym_nih_protocol(g, k);
    check_computes(*p, g);
    EXPECT_EQ(p->cost(), k * ceil_log2(static_cast<u64>(n / k) + 1));
    check_partition(*p, enumerate_leaves(*p));
  }
}

TEST(TableProtocol, ComputesRandomTables) {
  Rng rng(4);
  for (int n = 1; n <= 8; ++n) {
    std::vector<std::uint8_t> t(std::size_t{1} << n);
    for (auto& b : t) b = rng.bit();
    LeafGate g = LeafGate::truth_table(n, t);
    ProtocolPtr p = table_protocol(g);
    check_computes(*p, g);
    check_partition(*p, enumerate_leaves(*p));
  }
}

TEST(Enumerate, ConstantProtocolIsWholeSpace) {
  ProtocolPtr p = constant_protocol(4, true);
  std::vector<Rectangle> rects = enumerate_leaves(*p);
  ASSERT_EQ(rects.size(), 1u);
  EXPECT_TRUE(rects[0].transcript.empty());
  EXPECT_EQ(rects[0].sides[0].size(), 4u);
  EXPECT_EQ(rects[0].sides[1].size(), 4u);
}

TEST(Membership, ConstantProtocolAcceptsAnything) {
  ProtocolPtr p = constant_protocol(4, false);
  for (u64 a = 0; a < 4; ++a) EXPECT_TRUE(rectangle_membership(*p, 0, a, {}));
}

TEST(Membership, XorAliceParityMismatch) {
  ProtocolPtr p = xor_protocol(LeafGate::xor_mask(4, 0b1111));
  EXPECT_FALSE(rectangle_membership(*p, 0, 0b01, Transcript{0, 0}));
  EXPECT_TRUE(rectangle_membership(*p, 0, 0b11, Transcript{0, 0}));
  EXPECT_THROW(rectangle_membership(*p, 0, 0b01, Transcript{0}), ValidationError);
  EXPECT_THROW(rectangle_membership(*p, 0, 0b01, Transcript{0, 0, 1}), ValidationError);
}

TEST(Membership, AgreesWithTwoSidedSimulation) {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    ProtocolTree t = random_protocol_tree(8, 3, rng);
    EXPECT_EQ(t.depth(), 3);
    std::vector<Transcript> leaves;
    for (const Rectangle& r : enumerate_leaves(t)) leaves.push_back(r.transcript);
    for (u64 a = 0; a < 16; ++a)
      for (u64 b = 0; b < 16; ++b) {
        Transcript run;
        t.run(a | (b << 4), &run);
        for (const Transcript& tr : leaves) {
          bool both = rectangle_membership(t, 0, a, tr) && rectangle_membership(t, 1, b, tr);
          ASSERT_EQ(both, tr == run);
        }
      }
  }
}

TEST(Materialize, TreeMatchesIntensionalProtocol) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    LeafGate g = random_gate(6, GateClass::Mixed, rng);
    RandomizedPtr rp = protocol_for_gate(g, Rational(1, 4));
    ProtocolPtr p = rp->sample(random_string(rp->randomness_bits(), rng));
    ProtocolTree t = materialize(*p);
    EXPECT_LE(t.depth(), p->cost());
    for (u64 x = 0; x < 64; ++x) {
      Transcript a, b;
      ASSERT_EQ(t.run(x, &a), p->run(x, &b));
      ASSERT_EQ(a, b);
    }
    check_partition(t, enumerate_leaves(t));
  }
}

TEST(LtfProtocol, TwoOnesThresholdTwo) {
  LeafGate g = LeafGate::ltf({1, 1}, 2);
  const Rational delta(1, 4);
  RandomizedPtr rp = ltf_randomized_protocol(g, delta);
  ASSERT_LE(rp->randomness_bits(), 12);
  EXPECT_LE(rp->error_bound(), delta);
  auto f = [&](u64 x) { return g.eval(x); };
  for (u64 x = 0; x < 4; ++x) EXPECT_LE(exact_error_at(*rp, f, x), delta);
}

TEST(LtfProtocol, UnreachableThresholdIsConstantZero) {
  RandomizedPtr rp = ltf_randomized_protocol(LeafGate::ltf({2, -1, 3}, 6), Rational(1, 8));
  EXPECT_EQ(rp->cost(), 0);
  EXPECT_EQ(rp->randomness_bits(), 0);
  ProtocolPtr p = rp->sample({});
  for (u64 x = 0; x < 8; ++x) EXPECT_FALSE(p->run(x));
}

TEST(LtfProtocol, ZeroWeightsAreConstant) {
  RandomizedPtr one = ltf_randomized_protocol(LeafGate::ltf({0, 0, 0}, 0), Rational(1, 8));
  RandomizedPtr zero = ltf_randomized_protocol(LeafGate::ltf({0, 0, 0}, 1), Rational(1, 8));
  for (u64 x = 0; x < 8; ++x) {
    EXPECT_TRUE(one->sample({})->run(x));
    EXPECT_FALSE(zero->sample({})->run(x));
  }
}

TEST(LtfProtocol, MonteCarloErrorRate) {
  LeafGate g = LeafGate::ltf({3, -2, 1, 0}, 1);
  const Rational delta(1, 8);
  RandomizedPtr rp = ltf_randomized_protocol(g, delta);
  const int N = 10000;
  const double d = delta.get_d();
  const double half_width = 2.326 * std::sqrt(d * (1 - d) / N);  // one-sided 99%
  Rng rng(99);
  for (u64 x = 0; x < 16; ++x) {
    int wrong = 0;
    for (int i = 0; i < N; ++i) wrong += rp->sample(random_string(rp->randomness_bits(), rng))->run(x) != g.eval(x);
    EXPECT_LE(wrong / double(N), d + half_width) << "x=" << x;
  }
}

TEST(LtfProtocol, ExactErrorOnSmallRandomInstances) {
  Rng rng(41);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 25; ++trial) {
    int n = 2 + static_cast<int>(rng.below(5));
    LeafGate g = random_gate(n, GateClass::Ltf, rng);
    Rational delta(1, 2 + static_cast<long>(rng.below(3)));
    RandomizedPtr rp = ltf_randomized_protocol(g, delta);
    if (rp->randomness_bits() > 12) continue;
    ++checked;
    EXPECT_LE(rp->cost(), ltf_protocol_params(g, delta).rounds * (rp->randomness_bits() + 1) + 1);
    auto f = [&](u64 x) { return g.eval(x); };
    for (u64 x = 0; x < (u64{1} << n); ++x) ASSERT_LE(exact_error_at(*rp, f, x), delta) << unparse_gate(g);
  }
  EXPECT_GE(checked, 10);
}

TEST(LtfProtocol, CostIsLogTimesLog) {
  LeafGate g = LeafGate::ltf({5, 7, -3, 2, 9, -4, 1, 6}, 8);
  LtfProtocolParams prm = ltf_protocol_params(g, Rational(1, 100));
  RandomizedPtr rp = ltf_randomized_protocol(g, Rational(1, 100));
  EXPECT_EQ(prm.rounds, ceil_log2(static_cast<u64>(prm.bits) + 1));
  EXPECT_EQ(rp->cost(), prm.rounds * (prm.fingerprints + 1) + 1);
  EXPECT_LE(rp->error_bound(), Rational(1, 100));
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    ProtocolPtr p = rp->sample(random_string(rp->randomness_bits(), rng));
    EXPECT_LE(materialize(*p).depth(), rp->cost());
  }
}

TEST(SampleDeterministic, ZeroRandomness) {
  ProtocolPtr p = xor_protocol(LeafGate::xor_mask(4, 0b1010));
  RandomizedPtr rp = as_randomized(p);
  EXPECT_EQ(rp->randomness_bits(), 0);
  EXPECT_EQ(sample_deterministic(*rp, {}), p);
  EXPECT_THROW(sample_deterministic(*rp, RandomString{1}), ValidationError);
}

TEST(SampleDeterministic, SameStringSameTree) {
  RandomizedPtr rp = ltf_randomized_protocol(LeafGate::ltf({2, -1, 1, 3}, 2), Rational(1, 4));
  Rng rng(6);
  RandomString r = random_string(rp->randomness_bits(), rng);
  EXPECT_EQ(materialize(*sample_deterministic(*rp, r)), materialize(*sample_deterministic(*rp, r)));
}

TEST(SampleDeterministic, AveragingMatchesExtensionalTrees) {
  LeafGate g = LeafGate::ltf({1, 2, -1}, 1);
  RandomizedPtr rp = ltf_randomized_protocol(g, Rational(1, 2));
  int r = rp->randomness_bits();
  ASSERT_LE(r, 12);
  std::vector<ProtocolTree> trees;
  for (u64 v = 0; v < (u64{1} << r); ++v) trees.push_back(materialize(*rp->sample(random_string_from(v, r))));
  for (u64 x = 0; x < 8; ++x) {
    u64 accept = 0;
    for (const ProtocolTree& t : trees) {
      // walk the explicit tables
      std::size_t v = 0;
      while (!t.nodes()[v].leaf) {
        const auto& nd = t.nodes()[v];
        v = static_cast<std::size_t>(nd.child[nd.table[t.layout().block(x, nd.owner)]]);
      }
      accept += t.nodes()[v].output;
    }
    Rational p_accept = frac(BigInt(static_cast<unsigned long>(accept)), BigInt(1) << r);
    Rational err = exact_error_at(*rp, [&](u64 y) { return g.eval(y); }, x);
    EXPECT_EQ(g.eval(x) ? 1 - p_accept : p_accept, err);
  }
}

TEST(Majority, RepetitionCountAndShortCircuit) {
  EXPECT_EQ(majority_repetitions(Rational(1, 48)), 18 * 4);
  EXPECT_EQ(majority_repetitions(Rational(1, 3)), 18 * 2);
  RandomizedPtr base = ltf_randomized_protocol(LeafGate::ltf({1, 1, 1, 1}, 2), Rational(1, 64));
  EXPECT_EQ(reduce_error(base, Rational(1, 48)), base);
  RandomizedPtr amp = reduce_error(base, Rational(1, 100));
  EXPECT_NE(amp, base);
  EXPECT_EQ(amp->cost(), 18 * 5 * base->cost());
  EXPECT_LE(amp->error_bound(), Rational(1, 100));
}

TEST(Majority, BinomialTail) {
  EXPECT_EQ(binomial_upper_tail(3, Rational(1, 4)), Rational(5, 32));
  EXPECT_EQ(binomial_upper_tail(2, Rational(1, 3)), 1 - Rational(4, 9));
  EXPECT_EQ(binomial_upper_tail(1, Rational(1, 5)), Rational(1, 5));
}

TEST(Majority, ExactErrorWithinTail) {
  LeafGate g = LeafGate::ltf({1, 1}, 2);
  RandomizedPtr base = ltf_randomized_protocol(g, Rational(1, 2));
  RandomizedPtr amp = majority_protocol(base, 3);
  ASSERT_LE(amp->randomness_bits(), 12);
  auto f = [&](u64 x) { return g.eval(x); };
  for (u64 x = 0; x < 4; ++x) {
    Rational e = exact_error_at(*base, f, x);
    EXPECT_LE(exact_error_at(*amp, f, x), binomial_upper_tail(3, e));
    EXPECT_LE(exact_error_at(*amp, f, x), amp->error_bound());
  }
  Rng rng(2);
  ProtocolPtr p = amp->sample(random_string(amp->randomness_bits(), rng));
  check_partition(*p, enumerate_leaves(*p));
}

TEST(Majority, CopiesOfDeterministicProtocol) {
  LeafGate g = LeafGate::xor_mask(4, 0b0110);
  RandomizedPtr amp = majority_protocol(as_randomized(xor_protocol(g)), 5);
  EXPECT_EQ(amp->error_bound(), 0);
  ProtocolPtr p = amp->sample({});
  EXPECT_EQ(p->cost(), 10);
  check_computes(*p, g);
}
