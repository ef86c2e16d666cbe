#include "leafcomm/hardness.hpp"

#include "leafcomm/polynomial.hpp"

#include <cmath>

namespace leafcomm {

bool gip(int k, const Bits& x) {
  const int n = static_cast<int>(x.size());
  if (k < 1 || n % k != 0) throw ValidationError("GIP needs k to divide n");
  const int b = n / k;
  bool acc = false;
  for (int j = 0; j < b; ++j) {
    bool all = true;
    for (int i = 0; i < k && all; ++i) all = x[static_cast<std::size_t>(i * b + j)] != 0;
    acc ^= all;
  }
  return acc;
}

bool gip_word(int k, int n, u64 x) {
  if (k < 1 || n < 0 || n > 64 || n % k != 0) throw ValidationError("GIP needs k to divide n <= 64");
  const int b = n / k;
  u64 all = low_mask(b);
  for (int i = 0; i < k; ++i) all &= x >> (i * b);
  return parity(all & low_mask(b));
}

bool inner_product(int n, u64 x) {
  if (n % 2 != 0) throw ValidationError("inner product needs an even length");
  bool acc = false;
  for (int j = 0; j < n / 2; ++j) acc ^= ((x >> j) & 1) && ((x >> (j + n / 2)) & 1);
  return acc;
}

Table gip_table(int k, int n) {
  if (n > 24) throw ValidationError("GIP table limited to n <= 24");
  Table t(std::size_t{1} << n);
  for (u64 x = 0; x < t.size(); ++x) t[x] = gip_word(k, n, x);
  return t;
}

// ---------------------------------------------------------------- distributions

Distribution uniform_distribution(int n) {
  if (n < 0 || n > 24) throw ValidationError("distribution limited to n <= 24");
  Distribution d;
  d.n = n;
  d.weights.assign(std::size_t{1} << n, frac(1, BigInt(1) << n));
  return d;
}

Distribution make_distribution(std::vector<Rational> weights) {
  const std::size_t len = weights.size();
  if (len == 0 || (len & (len - 1)) != 0) throw ValidationError("distribution needs 2^n weights");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw ValidationError("distribution weights must be nonnegative");
    total += w;
  }
  if (total != 1) throw ValidationError("distribution weights sum to " + to_string(total) + ", not 1");
  Distribution d;
  d.n = std::countr_zero(len);
  d.weights = std::move(weights);
  return d;
}

Distribution random_distribution(int n, Rng& rng, int max_weight) {
  std::vector<long> raw(std::size_t{1} << n);
  long total = 0;
  for (auto& w : raw) total += (w = static_cast<long>(rng.below(static_cast<u64>(max_weight) + 1)));
  if (total == 0) total = raw[0] = 1;
  std::vector<Rational> weights;
  weights.reserve(raw.size());
  for (long w : raw) weights.push_back(frac(w, total));
  return make_distribution(std::move(weights));
}

namespace {

void check_sizes(const Table& f, const Distribution& d) {
  if (f.size() != d.weights.size()) throw ValidationError("function and distribution sizes differ");
}

}  // namespace

CorrelationReport correlation(const Table& f, const Table& g, const Distribution& d) {
  check_sizes(f, d);
  check_sizes(g, d);
  CorrelationReport r;
  r.agreement = 0;
  for (std::size_t x = 0; x < f.size(); ++x)
    if ((f[x] != 0) == (g[x] != 0)) r.agreement += d.weights[x];
  r.correlation = 2 * r.agreement - 1;
  return r;
}

Rational real_correlation(const std::vector<Rational>& c, const Table& f, const Distribution& d) {
  check_sizes(f, d);
  if (c.size() != f.size()) throw ValidationError("value vector and function sizes differ");
  Rational acc = 0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    Rational term = c[x] * d.weights[x];
    if (f[x])
      acc -= term;
    else
      acc += term;
  }
  return acc;
}

std::vector<Rational> parity_correlations(const Table& f, const Distribution& d) {
  check_sizes(f, d);
  if (d.n > 20) throw ValidationError("parity sweep limited to n <= 20");
  BigInt L = 1;
  for (const auto& w : d.weights) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), w.get_den_mpz_t());
  std::vector<BigInt> a(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    BigInt v = Rational(d.weights[x] * L).get_num();
    a[x] = f[x] ? BigInt(-v) : v;
  }
  for (std::size_t h = 1; h < a.size(); h <<= 1)
    for (std::size_t i = 0; i < a.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        BigInt u = a[j];
        a[j] += a[j + h];
        a[j + h] = u - a[j + h];
      }
  std::vector<Rational> out(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) out[s] = frac(a[s], L);
  return out;
}

ParityFit best_parity_correlation(const Table& f, const Distribution& d) {
  std::vector<Rational> w = parity_correlations(f, d);
  ParityFit best;
  best.correlation = w[0];
  if (-w[0] > best.correlation) {
    best.negated = true;
    best.correlation = -w[0];
  }
  for (std::size_t s = 1; s < w.size(); ++s) {
    if (w[s] > best.correlation) best = {s, false, w[s]};
    if (-w[s] > best.correlation) best = {s, true, -w[s]};
  }
  return best;
}

double lb_size_bound(double n, int k, const Rational& eps, double R) {
  if (n <= 1 || k < 1 || eps <= 0 || eps >= 1 || R < 0) throw ValidationError("lb_size_bound needs n > 1, k >= 1, 0 < eps < 1, R >= 0");
  double lr = R + std::log2(n);
  double le = std::log2(1.0 / eps.get_d());
  return n * n / (static_cast<double>(k) * k * std::pow(16.0, k) * lr * lr * le * le);
}

// ---------------------------------------------------------------- leaf XOR witness

LeafXorWitness leaf_xor_witness(const Formula& device, const Table& f, const Distribution& d, const Rational& eps0) {
  check_sizes(f, d);
  if (device.num_vars() != d.n) throw ValidationError("device and distribution disagree on n");
  if (eps0 <= 0 || eps0 >= 1) throw ValidationError("eps0 must be in (0, 1)");
  const int s = device.size();
  // eps0/2 in 0/1 output is eps0 in +-1 output: q = 1 - 2p over +-1 leaves
  MultilinearPoly p01 = build_approx(device, eps0 / 2).expand(20);
  MultilinearPoly pm = convert_basis(p01);
  MultilinearPoly q(Basis::PlusMinus, s);
  q.add(0, 1);
  for (const auto& [S, c] : pm.terms()) q.add(S, -2 * c);

  const std::size_t N = f.size();
  std::vector<u64> leaf_bits(N);
  for (u64 x = 0; x < N; ++x) {
    u64 bits = 0;
    for (int i = 0; i < s; ++i)
      if (device.leaves()[i].eval(x)) bits |= u64{1} << i;
    leaf_bits[x] = bits;
  }

  LeafXorWitness w;
  w.support = q.support_size();
  w.degree = q.degree();
  std::vector<Rational> qv(N);
  for (u64 x = 0; x < N; ++x) qv[x] = q.eval(leaf_bits[x]);
  w.approx_correlation = real_correlation(qv, f, d);
  w.guaranteed = eps0 / ((1 + eps0) * Rational(static_cast<long>(w.support)));

  bool first = true;
  for (const auto& [S, c] : q.terms()) {
    Rational e = 0;  // E[prod_{i in S} (-1)^{g_i} (-1)^f]
    for (u64 x = 0; x < N; ++x) {
      bool neg = parity(leaf_bits[x] & S) ^ (f[x] != 0);
      if (neg)
        e -= d.weights[x];
      else
        e += d.weights[x];
    }
    Rational a = abs_q(e);
    if (first || a > w.correlation) {
      w.leaves = S;
      w.negated = e < 0;
      w.correlation = a;
      first = false;
    }
  }
  return w;
}

double leaf_xor_floor(int s, const Rational& eps0, double c) {
  double e = c * std::sqrt(static_cast<double>(s)) * std::log2(1.0 / eps0.get_d());
  return std::pow(static_cast<double>(s), -e);
}

double measured_floor_constant(int s, const Rational& eps0, const Rational& correlation) {
  if (s <= 1 || correlation <= 0) return 0;
  double denom = std::sqrt(static_cast<double>(s)) * std::log2(1.0 / eps0.get_d()) * std::log2(static_cast<double>(s));
  return std::log2(1.0 / correlation.get_d()) / denom;
}

}  // namespace leafcomm
