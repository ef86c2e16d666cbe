#include "leafcomm/hardness.hpp"
#include "leafcomm/polynomial.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

using namespace leafcomm;

namespace {

// Brute-force signed parity sweep, written without the transform.
ParityFit slow_best_parity(const Table& f, const Distribution& d) {
  ParityFit best;
  bool first = true;
  for (u64 mask = 0; mask < f.size(); ++mask) {
    Rational e = 0;
    for (u64 x = 0; x < f.size(); ++x) {
      bool chi = parity(x & mask);
      if (chi == (f[x] != 0))
        e += d.weights[x];
      else
        e -= d.weights[x];
    }
    for (bool neg : {false, true}) {
      Rational c = neg ? Rational(-e) : e;
      if (first || c > best.correlation) {
        best = {mask, neg, c};
        first = false;
      }
    }
  }
  return best;
}

Rational agreement_of(const Table& f, const Table& g, const Distribution& d) {
  Rational a = 0;
  for (std::size_t x = 0; x < f.size(); ++x)
    if (f[x] == g[x]) a += d.weights[x];
  return a;
}

// Flips outputs of c in random order while agreement stays at least 1/2 + eps.
Table perturb(const Table& c, const Distribution& d, const Rational& eps, Rng& rng) {
  Table f = c;
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  Rational agree = 1;
  Rational floor = Rational(1, 2) + eps;
  for (std::size_t x : order) {
    if (rng.bit() && agree - d.weights[x] >= floor) {
      f[x] ^= 1;
      agree -= d.weights[x];
    }
  }
  return f;
}

// Largest measured floor constant over the XOR-formula fixture below, rounded up.
constexpr double kFloorConstantFixture = 0.75;

}  // namespace

TEST(Gip, Examples) {
  EXPECT_TRUE(gip(2, Bits{1, 0, 1, 1}));
  EXPECT_FALSE(gip(2, Bits(8, 0)));
  EXPECT_FALSE(gip(3, Bits(9, 0)));
  EXPECT_TRUE(gip(3, Bits(3, 1)));
  EXPECT_THROW(gip(3, Bits(8, 0)), ValidationError);
  // word form: x1=1,x2=0 | x3=1,x4=1 is 0b1101
  EXPECT_TRUE(gip_word(2, 4, 0b1101));
}

TEST(Gip, TwoBlocksIsInnerProduct) {
  for (int n = 2; n <= 16; n += 2)
    for (u64 x = 0; x < (u64{1} << n); ++x) ASSERT_EQ(gip_word(2, n, x), inner_product(n, x)) << n << " " << x;
}

TEST(Gip, BitsAndWordAgree) {
  for (int k : {1, 2, 3, 4})
    for (u64 x = 0; x < (u64{1} << 12); ++x) ASSERT_EQ(gip(k, bits_from_u64(x, 12)), gip_word(k, 12, x));
}

TEST(Correlation, Trivial) {
  Rng rng(3);
  Table f(64);
  for (auto& b : f) b = rng.bit();
  Table g = f;
  for (auto& b : g) b ^= 1;
  auto u = uniform_distribution(6);
  EXPECT_EQ(correlation(f, f, u).correlation, 1);
  EXPECT_EQ(correlation(f, g, u).correlation, -1);
  EXPECT_EQ(correlation(f, g, u).agreement, 0);
}

TEST(Correlation, TwiceAgreementMinusOne) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = random_distribution(5, rng);
    Table f(32), g(32);
    for (auto& b : f) b = rng.bit();
    for (auto& b : g) b = rng.bit();
    auto r = correlation(f, g, d);
    EXPECT_EQ(r.agreement, agreement_of(f, g, d));
    EXPECT_EQ(r.correlation, 2 * r.agreement - 1);
  }
}

TEST(Correlation, MalformedDistributions) {
  EXPECT_THROW(make_distribution({Rational(1, 2), Rational(1, 4), Rational(1, 4)}), ValidationError);
  EXPECT_THROW(make_distribution({Rational(1, 2), Rational(1, 4)}), ValidationError);
  EXPECT_THROW(make_distribution({Rational(3, 2), Rational(-1, 2)}), ValidationError);
  EXPECT_THROW(make_distribution({}), ValidationError);
  EXPECT_EQ(make_distribution({Rational(1, 4), Rational(3, 4)}).n, 1);
  auto u = uniform_distribution(3);
  EXPECT_THROW(correlation(Table(4), Table(8), u), ValidationError);
}

TEST(BestParity, ParityFindsItself) {
  auto u = uniform_distribution(6);
  for (u64 mask : {u64{0}, u64{1}, u64{0b101101}, u64{63}}) {
    Table f(64);
    for (u64 x = 0; x < 64; ++x) f[x] = parity(x & mask);
    auto fit = best_parity_correlation(f, u);
    EXPECT_EQ(fit.mask, mask);
    EXPECT_FALSE(fit.negated);
    EXPECT_EQ(fit.correlation, 1);
    for (auto& b : f) b ^= 1;
    fit = best_parity_correlation(f, u);
    EXPECT_EQ(fit.mask, mask);
    EXPECT_TRUE(fit.negated);
    EXPECT_EQ(fit.correlation, 1);
  }
}

TEST(BestParity, RandomFunctionsMatchSweep) {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int n = trial < 20 ? 4 : 6;
    auto d = trial % 2 ? uniform_distribution(n) : random_distribution(n, rng);
    Table f(std::size_t{1} << n);
    for (auto& b : f) b = rng.bit();
    auto a = best_parity_correlation(f, d);
    auto b = slow_best_parity(f, d);
    EXPECT_EQ(a.mask, b.mask);
    EXPECT_EQ(a.negated, b.negated);
    EXPECT_EQ(a.correlation, b.correlation);
  }
}

TEST(BestParity, TieBreaksToSmallestMaskPositive) {
  // constant 0 under uniform: mask 0 positive has correlation 1, every other parity 0
  auto u = uniform_distribution(3);
  auto fit = best_parity_correlation(Table(8, 0), u);
  EXPECT_EQ(fit.mask, 0u);
  EXPECT_FALSE(fit.negated);
  // IP on 2 bits: every mask has |correlation| 1/2
  Table ip(4);
  for (u64 x = 0; x < 4; ++x) ip[x] = inner_product(2, x);
  fit = best_parity_correlation(ip, uniform_distribution(2));
  EXPECT_EQ(fit.mask, 0u);
  EXPECT_FALSE(fit.negated);
  EXPECT_EQ(fit.correlation, Rational(1, 2));
}

TEST(BestParity, GipEightMatchesSweep) {
  auto t = gip_table(2, 8);
  auto u = uniform_distribution(8);
  auto a = best_parity_correlation(t, u);
  auto b = slow_best_parity(t, u);
  EXPECT_EQ(a.correlation, b.correlation);
  EXPECT_EQ(a.mask, b.mask);
  EXPECT_EQ(a.correlation, Rational(1, 16));
}

TEST(BestParity, GipCorrelationDecreasesWithN) {
  Rational prev = 2;
  for (int n : {4, 8, 12}) {
    auto c = best_parity_correlation(gip_table(2, n), uniform_distribution(n)).correlation;
    EXPECT_LT(c, prev) << n;
    EXPECT_EQ(c, frac(1, BigInt(1) << (n / 2)));
    prev = c;
  }
}

TEST(LowerBound, ArithmeticValue) {
  // n = 2^10, k = 2, R = 1, eps = 1/4: 2^20 / (4 * 256 * 11^2 * 2^2)
  double expect = 1048576.0 / (4.0 * 256.0 * 121.0 * 4.0);
  EXPECT_NEAR(lb_size_bound(1024, 2, Rational(1, 4), 1), expect, 1e-12);
}

TEST(LowerBound, DoublingNRatio) {
  // the log n factor keeps the ratio below 4: exactly 4 ((R + log n) / (R + log n + 1))^2
  for (double n : {64.0, 1024.0, 65536.0})
    for (double R : {0.0, 1.0, 5.0}) {
      double lr = R + std::log2(n);
      double ratio = lb_size_bound(2 * n, 3, Rational(1, 8), R) / lb_size_bound(n, 3, Rational(1, 8), R);
      EXPECT_NEAR(ratio, 4 * (lr / (lr + 1)) * (lr / (lr + 1)), 1e-9);
      EXPECT_LT(ratio, 4);
    }
}

TEST(LowerBound, DecreasingInR) {
  double prev = INFINITY;
  for (double R = 0; R <= 20; R += 0.5) {
    double v = lb_size_bound(4096, 2, Rational(1, 3), R);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(lb_size_bound(1, 2, Rational(1, 3), 1), ValidationError);
  EXPECT_THROW(lb_size_bound(16, 2, Rational(1), 1), ValidationError);
}

// An eps-approximation of C correlates with any f that C agrees with at rate 1/2 + eps.
TEST(CorrelationBounds, ApproximatorKeepsCorrelation) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 4 + static_cast<int>(rng.below(7));
    int s = 1 + static_cast<int>(rng.below(8));
    Rational eps = trial % 2 ? Rational(1, 10) : Rational(1, 5);
    Formula c = random_formula(n, s, trial % 3 == 0 ? GateClass::Xor : GateClass::Mixed, 1000 + trial);
    Table ct = truth_table(c);
    auto d = random_distribution(n, rng);
    Table f = perturb(ct, d, eps, rng);
    ASSERT_GE(agreement_of(ct, f, d), Rational(1, 2) + eps);

    // +-1 approximator: 1 - 2p with p an eps/2 approximation in 0/1 output
    auto approx = build_approx(c, eps / 2);
    Rational e = 0;
    for (u64 x = 0; x < ct.size(); ++x) {
      Rational ctilde = 1 - 2 * approx.eval_leaves(c.leaf_values(x));
      ASSERT_LE(abs_q(ctilde - (ct[x] ? -1 : 1)), eps);
      Rational term = ctilde * d.weights[x];
      if (f[x])
        e -= term;
      else
        e += term;
    }
    EXPECT_GE(e, eps) << "trial " << trial;
  }
}

// Formula over XOR leaves that agrees with f at 1/2 + eps0 has a parity above the correlation floor.
TEST(CorrelationBounds, FormulaOverXorHasCorrelatedParity) {
  Rng rng(77);
  const Rational eps0(1, 4);
  double worst_c = 0;
  for (int trial = 0; trial < 30; ++trial) {
    int n = 6 + static_cast<int>(rng.below(5));
    int s = 2 + static_cast<int>(rng.below(8));
    Formula dev = random_formula(n, s, GateClass::Xor, 5000 + trial);
    Table dt = truth_table(dev);
    auto d = random_distribution(n, rng);
    Table f = perturb(dt, d, eps0, rng);
    ASSERT_GE(agreement_of(dt, f, d), Rational(1, 2) + eps0);

    auto w = leaf_xor_witness(dev, f, d, eps0);
    EXPECT_GE(w.approx_correlation, eps0);
    EXPECT_GE(w.correlation, w.guaranteed);
    auto best = best_parity_correlation(f, d);
    EXPECT_GE(best.correlation, w.correlation);
    EXPECT_GE(best.correlation.get_d(), leaf_xor_floor(s, eps0, kFloorConstantFixture)) << "trial " << trial;
    worst_c = std::max(worst_c, measured_floor_constant(s, eps0, best.correlation));
  }
  std::cout << "measured floor constant c = " << worst_c << "\n";
  EXPECT_LE(worst_c, kFloorConstantFixture);
}
