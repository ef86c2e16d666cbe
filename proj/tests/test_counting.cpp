#include "leafcomm/counting.hpp"

#include <gtest/gtest.h>

using namespace leafcomm;

namespace {

FastCountResult fast(const LeafDevice& d, int nprime, TermMode mode = TermMode::Pruned,
                     MatmulBackend backend = MatmulBackend::SparseOuter) {
  FastCountOptions o;
  o.nprime = nprime;
  o.term_mode = mode;
  o.backend = backend;
  return count_sat_fast(d, o);
}

// Independent count: loop over inputs and evaluate the parsed text recursively via truth_table of each leaf.
BigInt naive_count(const Formula& f) {
  BigInt c = 0;
  for (u64 x = 0; x < (u64{1} << f.num_vars()); ++x) c += f.eval_leaves(f.leaf_values(x)) ? 1 : 0;
  return c;
}

}  // namespace

TEST(BruteForce, Examples) {
  EXPECT_EQ(count_sat_bruteforce(make_device(parse_formula("(xor 1 2 3 4)", 4))), 8);
  EXPECT_EQ(count_sat_bruteforce(make_device(parse_formula("(and (xor 1 2 3 4) (var 1))", 4))), 4);
  EXPECT_EQ(count_sat_bruteforce(make_device(parse_formula("(and (var 1) (not (var 1)))", 3))), 0);
}

TEST(ChooseNprime, Examples) {
  EXPECT_EQ(choose_nprime(1024, 16, 2, 8), 1);
  EXPECT_EQ(choose_nprime(64, 1, 1, 1), 62);
  EXPECT_EQ(choose_nprime(256, 4, 2, 4), 4);
  EXPECT_EQ(choose_nprime(10, 100, 5, 3), 1);
}

TEST(FastCount, SingleXorLeaf) {
  LeafDevice d = make_device(parse_formula("(xor 1 2 3 4)", 4));
  FastCountResult r = fast(d, 2);
  EXPECT_EQ(r.count, 8);
  EXPECT_EQ(r.count, count_sat_bruteforce(d));
}

TEST(FastCount, ConstantTrueDevice) {
  for (int n : {3, 8, 13, 16}) {
    LeafDevice d = make_device(parse_formula("(nxor)", n));
    EXPECT_EQ(fast(d, 2).count, BigInt(1) << n);
  }
}

TEST(FastCount, RandomXorDevicesMatchBruteForce) {
  for (u64 seed = 0; seed < 50; ++seed) {
    int s = 1 + static_cast<int>(seed % 16);
    Formula f = random_formula(12, s, GateClass::Xor, 3000 + seed);
    LeafDevice d = make_device(f);
    BigInt want = naive_count(f);
    ASSERT_EQ(count_sat_bruteforce(d), want);
    for (int np : {1, 2}) {
      FastCountResult r = fast(d, np);
      ASSERT_EQ(r.count, want) << unparse(f) << " n'=" << np;
      EXPECT_LE(r.max_gap, Rational(1, 3));
      EXPECT_FALSE(r.gap_violated);
    }
  }
}

TEST(FastCount, SymAndTableDevices) {
  for (u64 seed = 0; seed < 20; ++seed) {
    int n = 4 + 2 * static_cast<int>(seed % 4);
    Formula f = random_formula(n, 1 + static_cast<int>(seed % 8), seed % 2 ? GateClass::Sym : GateClass::Mixed,
                               4100 + seed);
    LeafDevice d = make_device(f);
    if (!d.deterministic()) continue;
    ASSERT_EQ(fast(d, 1 + static_cast<int>(seed % 3)).count, naive_count(f)) << unparse(f);
  }
}

TEST(FastCount, OddVariableCounts) {
  for (u64 seed = 0; seed < 10; ++seed) {
    Formula f = random_formula(7 + 2 * static_cast<int>(seed % 3), 6, GateClass::Xor, 4500 + seed);
    LeafDevice d = make_device(f);
    for (int np = 1; np <= 4; ++np) ASSERT_EQ(fast(d, np).count, naive_count(f));
  }
}

TEST(FastCount, DenseBackendAgrees) {
  for (u64 seed = 0; seed < 8; ++seed) {
    Formula f = random_formula(6, 3 + static_cast<int>(seed % 3), GateClass::Xor, 4700 + seed);
    LeafDevice d = make_device(f);
    FastCountResult a = fast(d, 2, TermMode::Pruned, MatmulBackend::SparseOuter);
    FastCountResult b = fast(d, 2, TermMode::Pruned, MatmulBackend::Dense);
    EXPECT_EQ(a.count, b.count);
    EXPECT_EQ(a.per_x, b.per_x);
    EXPECT_EQ(a.terms, b.terms);
    EXPECT_EQ(b.backend, "dense");
  }
}

TEST(TermCount, FullModeMatchesProductFormula) {
  for (u64 seed = 0; seed < 12; ++seed) {
    Formula f = random_formula(6, 1 + static_cast<int>(seed % 5), seed % 3 ? GateClass::Xor : GateClass::Sym,
                               4800 + seed);
    LeafDevice d = make_device(f);
    for (int np : {1, 2, 3}) {
      MultilinearPoly p = counting_polynomial(f, np);
      FastCountOptions o;
      o.nprime = np;
      o.term_mode = TermMode::Full;
      o.polynomial = p;
      FastCountResult full = count_sat_fast(d, o);
      EXPECT_EQ(BigInt(static_cast<unsigned long>(full.terms)), term_count_product_formula(d, p, np));
      EXPECT_EQ(full.count, naive_count(f));
      o.term_mode = TermMode::Pruned;
      FastCountResult pruned = count_sat_fast(d, o);
      EXPECT_LE(pruned.terms, full.terms);
      EXPECT_EQ(pruned.count, full.count);
    }
  }
}

TEST(TermCount, NondecreasingInNprime) {
  for (u64 seed = 0; seed < 6; ++seed) {
    Formula f = random_formula(10, 4 + static_cast<int>(seed), GateClass::Xor, 4900 + seed);
    LeafDevice d = make_device(f);
    MultilinearPoly p = counting_polynomial(f, 6);  // accurate enough for every n' below
    u64 prev = 0;
    for (int np = 1; np <= 6; ++np) {
      FastCountOptions o;
      o.nprime = np;
      o.polynomial = p;
      FastCountResult r = count_sat_fast(d, o);
      EXPECT_GE(r.terms, prev) << "n'=" << np;
      EXPECT_EQ(r.count, naive_count(f));
      prev = r.terms;
    }
  }
}

TEST(FastCount, MemoryCapIsExplicit) {
  LeafDevice d = make_device(random_formula(8, 6, GateClass::Xor, 17));
  FastCountOptions o;
  o.nprime = 2;
  o.memory_cap = 1;
  EXPECT_THROW(count_sat_fast(d, o), ValidationError);
}

TEST(FastCount, WrongLeafProtocolDetected) {
  Formula f = parse_formula("(or (xor 1 2) (var 3))", 4);
  LeafDevice d = make_device(f);
  d.protocols[0] = as_randomized(xor_protocol(LeafGate::xor_mask(4, 0b0101)));
  EXPECT_THROW(fast(d, 1), AssertionFailure);
}

TEST(FastCount, RoundingGapAssertionFires) {
  Formula f = parse_formula("(and (xor 1 2) (xor 3 4))", 4);
  LeafDevice d = make_device(f);
  MultilinearPoly p = exact_multilinear(std::vector<std::uint8_t>{0, 0, 0, 1});
  p.add(0, Rational(1, 5));  // off by 1/5 at every point, 2/5 after summing two restrictions
  FastCountOptions o;
  o.nprime = 1;
  o.polynomial = p;
  EXPECT_THROW(count_sat_fast(d, o), AssertionFailure);
  o.strict_rounding = false;
  EXPECT_TRUE(count_sat_fast(d, o).gap_violated);
}

TEST(FastCount, RejectsRandomizedLeaves) {
  LeafDevice d = make_device(parse_formula("(ltf (1 1 1 1) 2)", 4), Rational(1, 8));
  EXPECT_THROW(fast(d, 1), ValidationError);
}

TEST(Matmul, Examples) {
  RationalMatrix id{{1, 0}, {0, 1}};
  RationalMatrix m{{Rational(1, 2), 3}, {-4, Rational(5, 7)}};
  EXPECT_EQ(matmul(id, m), m);
  RationalMatrix row(1, std::vector<Rational>(9, Rational(1)));
  RationalMatrix col(9, std::vector<Rational>(1, Rational(1)));
  EXPECT_EQ(matmul(row, col)[0][0], 9);
  EXPECT_THROW(matmul(row, row), ValidationError);
}

TEST(Matmul, AgreesWithTripleLoop) {
  Rng rng(12);
  RationalMatrix a(8, std::vector<Rational>(3)), b(3, std::vector<Rational>(8));
  for (auto& r : a)
    for (auto& v : r) v = frac(static_cast<long>(rng.below(21)) - 10, 1 + static_cast<long>(rng.below(6)));
  for (auto& r : b)
    for (auto& v : r) v = frac(static_cast<long>(rng.below(21)) - 10, 1 + static_cast<long>(rng.below(6)));
  RationalMatrix c = matmul(a, b);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      Rational want = 0;
      for (int k = 0; k < 3; ++k) want += a[i][k] * b[k][j];
      EXPECT_EQ(c[i][j], want);
    }
}

TEST(RandomizedCount, LtfDeviceRepeatedTrials) {
  Formula f = parse_formula("(or (ltf (2 -1 1 1 0 3 -2 1) 3) (ltf (1 1 1 1 1 1 1 1) 5))", 8);
  LeafDevice d = make_device(f, Rational(1, 1024));
  BigInt want = count_sat_bruteforce(d);
  int ok = 0;
  for (u64 seed = 0; seed < 100; ++seed) ok += count_sat_randomized(d, 2, 0.99, seed).count == want;
  EXPECT_GE(ok, 95);
}

TEST(RandomizedCount, ZeroRandomnessMatchesDeterministic) {
  Formula f = random_formula(8, 5, GateClass::Xor, 66);
  LeafDevice d = make_device(f);
  RandomizedCountResult r = count_sat_randomized(d, 2, 0.99, 1);
  EXPECT_EQ(r.repetitions, 1);
  EXPECT_EQ(r.count, fast(d, 2).count);
}

TEST(RandomizedCount, NoRepetitionWhenAlreadyAccurate) {
  Formula f = parse_formula("(and (ltf (1 2 -1 1) 2) (ltf (1 -1 1 1) 1))", 4);
  LeafDevice d = make_device(f, Rational(1, 1024));
  RandomizedCountResult r = count_sat_randomized(d, 1, 0.99, 3);
  for (int reps : r.leaf_reps) EXPECT_EQ(reps, 0);
  EXPECT_EQ(r.eps_prime, Rational(1, 12));
  EXPECT_EQ(r.count, count_sat_bruteforce(d));
}

TEST(RandomizedCount, MajorityReductionApplied) {
  Formula f = parse_formula("(ltf (1 1 -1 2) 2)", 4);
  LeafDevice d = make_device(f, Rational(1, 4));
  RandomizedCountResult r = count_sat_randomized(d, 1, 0.9, 5);
  ASSERT_EQ(r.leaf_reps.size(), 1u);
  EXPECT_EQ(r.leaf_reps[0], majority_repetitions(Rational(1, 6)));
  EXPECT_LE(r.run_failure, Rational(1, 3));
  EXPECT_EQ(r.count, count_sat_bruteforce(d));
}
