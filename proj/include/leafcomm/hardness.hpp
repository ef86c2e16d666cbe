/*! \file hardness.hpp
  \brief Generalized inner product, exact correlations under explicit
  distributions, best signed parity, and the size lower-bound calculator.

  Boolean functions are truth tables over {0,1}^n (index = input, x1 = bit 0).
  Correlations use +-1 semantics: E[(-1)^f (-1)^g].
*/
#pragma once

#include "leafcomm/common.hpp"
#include "leafcomm/formula.hpp"
#include "leafcomm/prg.hpp"

#include <vector>

namespace leafcomm {

using Table = std::vector<std::uint8_t>;

/// Parity over j of the AND of x_j^(1..k); blocks are contiguous, k divides n.
bool gip(int k, const Bits& x);
bool gip_word(int k, int n, u64 x);
/// <first half, second half> mod 2, coded without blocks.
bool inner_product(int n, u64 x);
Table gip_table(int k, int n);

struct Distribution {
  int n = 0;
  std::vector<Rational> weights;  // one per input, summing to 1
};

Distribution uniform_distribution(int n);
/// Validates length 2^n, nonnegative entries, total 1.
Distribution make_distribution(std::vector<Rational> weights);
/// Integer weights in [0, max_weight] normalized (at least one positive).
Distribution random_distribution(int n, Rng& rng, int max_weight = 16);

struct CorrelationReport {
  Rational correlation;  // E[(-1)^f (-1)^g]
  Rational agreement;    // Pr[f = g]
};

CorrelationReport correlation(const Table& f, const Table& g, const Distribution& d);
/// E[c(x) (-1)^f(x)] for a real-valued c.
Rational real_correlation(const std::vector<Rational>& c, const Table& f, const Distribution& d);

struct ParityFit {
  u64 mask = 0;
  bool negated = false;
  Rational correlation;
};

/// E[chi_S (-1)^f] for every mask S (weighted Walsh-Hadamard transform, n <= 20).
std::vector<Rational> parity_correlations(const Table& f, const Distribution& d);
/// Argmax over signed parities; ties to the smallest mask, then the positive sign.
ParityFit best_parity_correlation(const Table& f, const Distribution& d);

/// n^2 / (k^2 16^k (R + log2 n)^2 log2(1/eps)^2), every constant set to 1.
double lb_size_bound(double n, int k, const Rational& eps, double R);

/*! \brief Constructive form of the XOR-of-leaves correlation argument.

  Takes an eps0-approximation q of the formula over +-1 leaf values and
  returns the leaf set S (and sign) maximizing |E[prod_{i in S} g_i f]| over
  the support of q. `guaranteed` is eps0 / ((1 + eps0) |support|), the bound the
  argument proves when Pr[D = f] >= 1/2 + eps0.
*/
struct LeafXorWitness {
  u64 leaves = 0;
  bool negated = false;
  Rational correlation;
  Rational guaranteed;
  Rational approx_correlation;  // E[q(g(x)) (-1)^f(x)], at least eps0 by the approximation argument
  std::size_t support = 0;
  int degree = 0;
};

LeafXorWitness leaf_xor_witness(const Formula& device, const Table& f, const Distribution& d, const Rational& eps0);

/// s^{-c sqrt(s) log2(1/eps0)}.
double leaf_xor_floor(int s, const Rational& eps0, double c);
/// The c at which `correlation` meets the floor exactly (0 when s = 1).
double measured_floor_constant(int s, const Rational& eps0, const Rational& correlation);

}  // namespace leafcomm
