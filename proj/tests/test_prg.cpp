#include "leafcomm/hardness.hpp"
#include "leafcomm/prg.hpp"
#include "leafcomm/protocols.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace leafcomm;

namespace {

using u128 = unsigned __int128;

int deg(u128 p) {
  int d = -1;
  for (int i = 0; i < 128; ++i)
    if ((p >> i) & 1) d = i;
  return d;
}

u128 pmod(u128 a, u128 f) {
  int df = deg(f);
  for (int d = deg(a); d >= df; d = deg(a)) a ^= f << (d - df);
  return a;
}

u128 mulmod(u128 a, u128 b, u128 f) {
  u128 r = 0;
  for (int i = 0; i <= deg(b); ++i)
    if ((b >> i) & 1) r ^= a << i;
  // r has degree < 2 deg(f) <= 128 only when deg(f) <= 64
  return pmod(r, f);
}

u128 pgcd(u128 a, u128 b) {
  while (b) {
    u128 t = pmod(a, b);
    a = b;
    b = t;
  }
  return a;
}

// Ben-Or: f of degree l is irreducible iff gcd(f, x^(2^i) - x) = 1 for i <= l/2.
bool irreducible(u128 f) {
  int l = deg(f);
  u128 x = 2, p = x;
  for (int i = 1; i <= l / 2; ++i) {
    p = mulmod(p, p, f);
    if (pgcd(f, p ^ x) != 1) return false;
  }
  return true;
}

// Output bits from schoolbook polynomial products reduced by long division.
u64 slow_small_bias(u64 seed, int n, int l) {
  u128 f = (u128{1} << l) | irreducible_low_terms(l);
  u128 a = seed & low_mask(l), b = (seed >> l) & low_mask(l), pw = a;
  u64 out = 0;
  for (int j = 0; j < n; ++j) {
    if (parity(static_cast<u64>(pw & b))) out |= u64{1} << j;
    pw = mulmod(pw, a, f);
  }
  return out;
}

Rational direct_max_bias(int n, int l) {
  std::vector<long> sum(std::size_t{1} << n, 0);
  for (u64 seed = 0; seed < (u64{1} << (2 * l)); ++seed) {
    u64 y = slow_small_bias(seed, n, l);
    for (u64 mask = 1; mask < sum.size(); ++mask) sum[mask] += parity(mask & y) ? -1 : 1;
  }
  long worst = 0;
  for (u64 mask = 1; mask < sum.size(); ++mask) worst = std::max(worst, std::labs(sum[mask]));
  return frac(worst, BigInt(1) << (2 * l));
}

Table random_table(int bits, Rng& rng) {
  Table t(std::size_t{1} << bits);
  for (auto& v : t) v = rng.bit();
  return t;
}

}  // namespace

TEST(Gf2Field, TableEntriesAreIrreducible) {
  for (int l = 1; l <= 64; ++l) {
    u128 f = (u128{1} << l) | irreducible_low_terms(l);
    EXPECT_TRUE(irreducible(f)) << "l=" << l;
  }
  EXPECT_THROW(irreducible_low_terms(65), ValidationError);
}

TEST(Gf2Field, FieldAxioms) {
  Rng rng(5);
  for (int l : {1, 2, 7, 8, 13, 31, 32, 33, 63, 64}) {
    Gf2Field F(l);
    u128 f = (u128{1} << l) | irreducible_low_terms(l);
    for (int trial = 0; trial < 50; ++trial) {
      u64 a = rng.next() & F.mask(), b = rng.next() & F.mask(), c = rng.next() & F.mask();
      EXPECT_EQ(F.mul(a, 1), a);
      EXPECT_EQ(F.mul(a, b), F.mul(b, a));
      EXPECT_EQ(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)));
      EXPECT_EQ(F.mul(a, b ^ c), F.mul(a, b) ^ F.mul(a, c));
      EXPECT_EQ(F.mul(a, b), static_cast<u64>(mulmod(a, b, f)));
    }
  }
  for (int l = 1; l <= 12; ++l) {
    Gf2Field F(l);
    for (u64 a = 1; a < (u64{1} << l); ++a) {
      u64 p = 1;  // a^(2^l - 1) = 1 in the multiplicative group
      for (u64 e = 0; e + 1 < (u64{1} << l); ++e) p = F.mul(p, a);
      ASSERT_EQ(p, 1u) << "l=" << l << " a=" << a;
    }
  }
}

TEST(SmallBias, Examples) {
  EXPECT_EQ(small_bias_ell(8, Rational(1, 8)), 6);
  EXPECT_EQ(small_bias_ell(1, Rational(1, 2)), 1);
  Bits zero_a(12, 0);
  for (int i = 6; i < 12; ++i) zero_a[i] = 1;  // a = 0, b arbitrary
  for (auto bit : small_bias_expand(zero_a, 8, Rational(1, 8))) EXPECT_EQ(bit, 0);
  EXPECT_THROW(small_bias_expand(Bits(11), 8, Rational(1, 8)), ValidationError);
  EXPECT_THROW(small_bias_ell(4, Rational(0)), ValidationError);
  EXPECT_THROW(small_bias_ell(1 << 20, Rational(1, BigInt(1) << 50)), ValidationError);
}

TEST(SmallBias, SingleOutputBitBias) {
  for (const Rational& delta : {Rational(1, 2), Rational(1, 4), Rational(1, 16)}) {
    int l = small_bias_ell(1, delta);
    long sum = 0;
    for (u64 seed = 0; seed < (u64{1} << (2 * l)); ++seed) {
      Bits y = small_bias_expand(bits_from_u64(seed, 2 * l), 1, delta);
      sum += y[0] ? -1 : 1;
    }
    EXPECT_LE(abs_q(frac(sum, BigInt(1) << (2 * l))), delta);
  }
}

TEST(SmallBias, EightBitsAtOneEighth) {
  Rational worst = direct_max_bias(8, 6);
  EXPECT_LE(worst, Rational(1, 8));
  EXPECT_EQ(small_bias_max_bias(8, 6), worst);
}

TEST(SmallBias, FastBiasMatchesDirectOracle) {
  for (int l = 1; l <= 6; ++l)
    for (int n : {1, 2, 5, 9}) EXPECT_EQ(small_bias_max_bias(n, l), direct_max_bias(n, l)) << n << " " << l;
}

TEST(SmallBias, SoundnessUpToTwelve) {
  for (int l = 1; l <= 12; ++l)
    for (int n : {1, 3, 8, 16}) EXPECT_LE(small_bias_max_bias(n, l), frac(n, BigInt(1) << l)) << n << " " << l;
}

TEST(SmallBias, BitsAndWordExpansionAgree) {
  Rng rng(8);
  Generator g = small_bias_generator(20, Rational(1, 64));
  for (int i = 0; i < 200; ++i) {
    u64 seed = rng.next() & low_mask(g.seed_len);
    EXPECT_EQ(bits_to_u64(g.expand(bits_from_u64(seed, g.seed_len))), g.expand64(seed));
    EXPECT_EQ(g.expand64(seed), slow_small_bias(seed, 20, g.ell));
  }
}

TEST(Extractor, HashPartIsUniversal) {
  for (ExtractorBackend be : {ExtractorBackend::ToeplitzHash, ExtractorBackend::FieldHash}) {
    const int r = 6;
    for (int m = 1; m <= ExtractorSpec{r, 0, be}.max_hash_bits(); ++m) {
      ExtractorSpec e{r, m, be};
      const u64 seeds = u64{1} << e.seed_bits();
      for (u64 x = 0; x < 64; ++x)
        for (u64 y = x + 1; y < 64; ++y) {
          u64 coll = 0;
          for (u64 z = 0; z < seeds; ++z) {
            Bits zb = bits_from_u64(z, e.seed_bits());
            Bits ex = extract(e, bits_from_u64(x, r), zb), ey = extract(e, bits_from_u64(y, r), zb);
            coll += Bits(ex.begin(), ex.begin() + m) == Bits(ey.begin(), ey.begin() + m);
          }
          ASSERT_LE(coll * (u64{1} << m), seeds) << extractor_backend_name(be) << " m=" << m;
        }
    }
  }
}

TEST(Extractor, SeedLengths) {
  EXPECT_EQ((ExtractorSpec{8, 3, ExtractorBackend::ToeplitzHash}.seed_bits()), 7);
  EXPECT_EQ((ExtractorSpec{8, 3, ExtractorBackend::FieldHash}.seed_bits()), 5);
  EXPECT_EQ((ExtractorSpec{8, 0, ExtractorBackend::FieldHash}.seed_bits()), 8);
  EXPECT_EQ((ExtractorSpec{8, 0, ExtractorBackend::FieldHash}.error_bound()), 0);
  EXPECT_EQ((ExtractorSpec{8, 4, ExtractorBackend::FieldHash}.error_bound()), Rational(1, 8));
}

TEST(Inw, OneLevelStructure) {
  InwConfig cfg = inw_config_with_hash_bits(8, 2, 2, {2}, ExtractorBackend::ToeplitzHash);
  EXPECT_EQ(cfg.t, 1);
  EXPECT_EQ(cfg.seed_len, 4 + 3);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    Bits seed = bits_from_u64(rng.next(), cfg.seed_len);
    Bits a(seed.begin(), seed.begin() + 4), z(seed.begin() + 4, seed.end());
    Bits want = a;
    Bits e = extract(cfg.levels[0], a, z);
    want.insert(want.end(), e.begin(), e.end());
    EXPECT_EQ(inw_expand(seed, cfg), want);
    EXPECT_EQ(inw_expand(seed, cfg), inw_expand(seed, cfg));
  }
}

TEST(Inw, ProductFunctionsExhaustive) {
  Rng rng(11);
  for (ExtractorBackend be : {ExtractorBackend::ToeplitzHash, ExtractorBackend::FieldHash})
    for (int m : {1, 2}) {
      InwConfig cfg = inw_config_with_hash_bits(8, 2, 2, {m}, be);
      Generator g = inw_generator(cfg);
      for (int trial = 0; trial < 50; ++trial) {
        Table h1 = random_table(4, rng), h2 = random_table(4, rng);
        FoolingGap gap = fooling_gap(g, [&](u64 x) { return h1[x & 15] && h2[x >> 4]; });
        ASSERT_TRUE(gap.exact);
        EXPECT_LE(gap.gap, cfg.delta_prime) << extractor_backend_name(be) << " m=" << m;
      }
    }
}

TEST(Inw, FourPartyHybridBound) {
  Rng rng(12);
  InwConfig cfg = inw_config_with_hash_bits(16, 4, 0, {1, 2}, ExtractorBackend::FieldHash);
  EXPECT_EQ(cfg.t, 2);
  Generator g = inw_generator(cfg);
  ASSERT_LE(g.seed_len, 24);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Table> h;
    for (int j = 0; j < 4; ++j) h.push_back(random_table(4, rng));
    FoolingGap gap = fooling_gap(g, [&](u64 x) {
      for (int j = 0; j < 4; ++j)
        if (!h[j][(x >> (4 * j)) & 15]) return false;
      return true;
    });
    EXPECT_LE(gap.gap, 9 * cfg.delta_prime);
  }
}

TEST(Inw, CostTwoProtocolsWithinDelta) {
  Rng rng(13);
  InwConfig cfg = inw_config_with_hash_bits(8, 2, 2, {1}, ExtractorBackend::ToeplitzHash);
  Generator g = inw_generator(cfg);
  for (int trial = 0; trial < 50; ++trial) {
    ProtocolTree tree = random_protocol_tree(8, 2, rng);
    int ones = 0;
    for (const Rectangle& r : enumerate_leaves(tree)) ones += r.output;
    FoolingGap gap = fooling_gap(g, [&](u64 x) { return tree.run(x); });
    EXPECT_LE(gap.gap, ones * cfg.delta_prime);
    EXPECT_LE(gap.gap, cfg.delta);
  }
}

TEST(Inw, AutomaticConfigMeetsTarget) {
  for (int k : {2, 4, 8}) {
    InwConfig cfg = inw_config(64, k, 3, Rational(1, 16), ExtractorBackend::ToeplitzHash);
    EXPECT_LE(cfg.delta, Rational(1, 16));
    EXPECT_EQ(inw_expand(Bits(static_cast<std::size_t>(cfg.seed_len), 1), cfg).size(), 64u);
  }
  EXPECT_THROW(inw_config(12, 3, 1, Rational(1, 2), ExtractorBackend::ToeplitzHash), ValidationError);
  EXPECT_THROW(inw_config_with_hash_bits(8, 2, 1, {3}, ExtractorBackend::FieldHash), ValidationError);
  EXPECT_THROW(inw_config_with_hash_bits(8, 2, 1, {1, 1}, ExtractorBackend::FieldHash), ValidationError);
}

TEST(GipStretch, Layout) {
  Generator g = gip_stretch_generator(4, 2, 2);
  EXPECT_EQ(g.out_len, 4 * 2 + 2);
  EXPECT_EQ(gip_stretch_generator(6, 3, 3).out_len, 6 * 3 + 3);
  for (auto b : gip_stretch_expand(Bits(8, 0), 4, 2, 2)) EXPECT_EQ(b, 0);
  EXPECT_THROW(gip_stretch_expand(Bits(9, 0), 3, 3, 2), ValidationError);
  EXPECT_THROW(gip_stretch_generator(4, 3, 2), ValidationError);
}

TEST(GipStretch, ConsistencyExhaustive) {
  struct P {
    int m, t, k;
  };
  for (P p : {P{4, 2, 2}, P{8, 2, 2}, P{2, 8, 2}, P{4, 4, 2}, P{4, 4, 4}, P{6, 2, 2}, P{3, 3, 3}}) {
    const int b = p.m / p.k, per = p.t / p.k;
    for (u64 seed = 0; seed < (u64{1} << (p.m * p.t)); ++seed) {
      Bits out = gip_stretch_expand(bits_from_u64(seed, p.m * p.t), p.m, p.t, p.k);
      ASSERT_EQ(static_cast<int>(out.size()), p.m * p.t + p.t);
      // rebuild each x_j from the data bits, then check the GIP bits against a word GIP
      std::vector<u64> x(static_cast<std::size_t>(p.t), 0);
      std::vector<std::uint8_t> gip_bits;
      std::size_t pos = 0;
      for (int i = 0; i < p.k; ++i) {
        for (int j = 0; j < p.t; ++j)
          for (int q = 0; q < b; ++q) x[j] |= u64{out[pos++]} << (i * b + q);
        for (int j = 0; j < per; ++j) gip_bits.push_back(out[pos++]);
      }
      for (int j = 0; j < p.t; ++j) ASSERT_EQ(gip_bits[j], gip_word(p.k, p.m, x[j]));
      for (int j = 0; j < p.t; ++j) ASSERT_EQ(x[j], (seed >> (j * p.m)) & low_mask(p.m));
    }
  }
}

TEST(Fooling, ConstantFunctionHasNoGap) {
  for (const Generator& g : {small_bias_generator(10, Rational(1, 8)), gip_stretch_generator(4, 2, 2),
                             inw_generator(inw_config_with_hash_bits(8, 2, 1, {1}, ExtractorBackend::ToeplitzHash))}) {
    FoolingGap r = fooling_gap(g, [](u64) { return true; });
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.gap, 0);
  }
}

TEST(Fooling, SmallBiasAgainstParities) {
  Generator g = small_bias_generator(8, Rational(1, 8));
  for (u64 mask = 1; mask < 256; ++mask) {
    FoolingGap r = fooling_gap(g, [&](u64 x) { return parity(x & mask); });
    // gap on a parity is half its bias
    EXPECT_LE(r.gap, Rational(1, 16));
  }
}

TEST(Fooling, SampledRegimeReportsHalfWidth) {
  Generator g = small_bias_generator(30, Rational(1, 1024));
  FoolingGap r = fooling_gap(g, [](u64 x) { return parity(x & 0x2AAAAAAA); }, 4, 200000);
  EXPECT_FALSE(r.exact);
  EXPECT_GT(r.half_width, 0);
  EXPECT_LE(r.estimate, 1.0 / 2048 + r.half_width);
}

TEST(Fooling, FormulaXorWithScheduleConstant) {
  const Rational eps(1, 4);
  for (u64 i = 0; i < 8; ++i) {
    int n = 6 + static_cast<int>(i % 3), s = 1 + static_cast<int>(i % 4);
    Formula f = random_formula(n, s, GateClass::Xor, 777 + i);
    Generator g = small_bias_generator_ell(n, schedule_ell(n, s, eps, 0.25));
    EXPECT_LE(fooling_gap(g, [&](u64 x) { return f.eval(x); }).gap, eps);
  }
}

TEST(SeedLength, Examples) {
  SeedLengthParams p;
  p.n = 256;
  p.s = 100;
  p.eps = Rational(1, 8);
  SeedLengthReport r = seed_length_report(SeedModel::FormulaXor, p);
  EXPECT_NEAR(r.theoretical, 10 * std::log2(100.0) * 3 + 8, 1e-9);
  ASSERT_TRUE(r.implemented.has_value());
  EXPECT_EQ(*r.implemented, 2 * 208);

  p.s = 1;
  EXPECT_NEAR(seed_length_report(SeedModel::FormulaXor, p).theoretical, 8, 1e-12);

  p.s = 16;
  p.halfspaces = 16;
  p.eps = Rational(1, 16);
  EXPECT_NEAR(seed_length_report(SeedModel::FormulaLtf, p).theoretical, 16 * 2 * 8 * 12, 1e-9);
  EXPECT_THROW(parse_seed_model("formula_and"), ValidationError);
}
