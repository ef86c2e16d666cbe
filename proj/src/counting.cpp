#include "leafcomm/counting.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace leafcomm {

bool LeafDevice::deterministic() const {
  for (const auto& p : protocols)
    if (p->randomness_bits() != 0 || p->error_bound() != 0) return false;
  return true;
}

int LeafDevice::max_cost() const {
  int c = 0;
  for (const auto& p : protocols) c = std::max(c, p->cost());
  return c;
}

LeafDevice make_device(const Formula& f, const Rational& delta) {
  LeafDevice d{f, {}};
  for (const LeafGate& g : f.leaves()) d.protocols.push_back(protocol_for_gate(g, delta));
  return d;
}

BigInt count_sat_bruteforce(const Formula& f) {
  if (f.num_vars() > 28) throw ValidationError("brute-force counting supports n <= 28");
  u64 count = 0;
  for (u64 x = 0; x < (u64{1} << f.num_vars()); ++x) count += f.eval(x);
  return BigInt(static_cast<unsigned long>(count));
}

BigInt count_sat_bruteforce(const LeafDevice& d) { return count_sat_bruteforce(d.formula); }

int choose_nprime(int n, int s, int D, double c) {
  if (n <= 0 || s <= 0 || D <= 0 || c <= 0) throw ValidationError("choose_nprime needs positive arguments");
  double lg = std::log2(static_cast<double>(s));
  double lg2 = s <= 2 ? 1.0 : std::max(1.0, lg * lg);
  double v = n / (c * std::sqrt(static_cast<double>(s)) * lg2 * D);
  long k = static_cast<long>(std::floor(v + 1e-9));
  k = std::min<long>(k, n - 2);
  return static_cast<int>(std::max<long>(1, k));
}

std::string backend_name(MatmulBackend b) { return b == MatmulBackend::SparseOuter ? "sparse_outer" : "dense"; }

RationalMatrix matmul(const RationalMatrix& a, const RationalMatrix& b) {
  std::size_t inner = b.size();
  for (const auto& row : a)
    if (row.size() != inner) throw ValidationError("matrix dimensions do not agree");
  std::size_t cols = b.empty() ? 0 : b[0].size();
  for (const auto& row : b)
    if (row.size() != cols) throw ValidationError("ragged right matrix");
  RationalMatrix c(a.size(), std::vector<Rational>(cols, Rational(0)));
  const std::size_t block = 32;
  for (std::size_t k0 = 0; k0 < inner; k0 += block)
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = k0; k < std::min(inner, k0 + block); ++k) {
        if (a[i][k] == 0) continue;
        for (std::size_t j = 0; j < cols; ++j)
          if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
      }
  return c;
}

namespace {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

struct Split {
  int n = 0, size_a = 0, size_b = 0;
  int t_a = 0, t_b = 0;  // restricted bits per side
  int f_a = 0, f_b = 0;  // free bits per side
};

Split make_split(int n, int nprime) {
  PartyLayout l = PartyLayout::two_party(n);
  Split sp;
  sp.n = n;
  sp.size_a = l.sizes[0];
  sp.size_b = l.sizes[1];
  sp.t_a = (nprime + 1) / 2;
  sp.t_b = nprime / 2;
  if (nprime < 1 || sp.t_a > sp.size_a || sp.t_b > sp.size_b)
    throw ValidationError("n' must satisfy 1 <= n' <= n with each half keeping its share");
  sp.f_a = sp.size_a - sp.t_a;
  sp.f_b = sp.size_b - sp.t_b;
  if (sp.f_a + sp.f_b > 22) throw ValidationError("too many free variables for the evaluation matrix");
  return sp;
}

struct OneRect {
  std::vector<Bitset> alpha;  // per restriction of Alice's part
  std::vector<Bitset> beta;   // per restriction of Bob's part
};

// 1-output rectangles of every leaf, split by restriction.
std::vector<std::vector<OneRect>> leaf_rectangles(const LeafDevice& d, const std::vector<ProtocolPtr>& protos,
                                                  const Split& sp, bool check) {
  std::vector<std::vector<OneRect>> out;
  const auto& gates = d.formula.leaves();
  for (std::size_t i = 0; i < protos.size(); ++i) {
    if (!(protos[i]->layout() == PartyLayout::two_party(sp.n)))
      throw ValidationError("leaf protocol must use the two-party split of all n inputs");
    std::vector<OneRect> ones;
    for (const Rectangle& r : enumerate_leaves(*protos[i])) {
      if (check) {
        for (u64 a : r.sides[0])
          for (u64 b : r.sides[1])
            if (gates[i].eval(a | (b << sp.size_a)) != r.output)
              throw AssertionFailure("leaf " + std::to_string(i + 1) + " protocol rectangle is not monochromatic");
      }
      if (!r.output) continue;
      OneRect o;
      o.alpha.assign(std::size_t{1} << sp.t_a, Bitset(std::size_t{1} << sp.f_a));
      o.beta.assign(std::size_t{1} << sp.t_b, Bitset(std::size_t{1} << sp.f_b));
      for (u64 a : r.sides[0]) o.alpha[a & low_mask(sp.t_a)].set(a >> sp.t_a);
      for (u64 b : r.sides[1]) o.beta[b & low_mask(sp.t_b)].set(b >> sp.t_b);
      ones.push_back(std::move(o));
    }
    out.push_back(std::move(ones));
  }
  return out;
}

BigInt denominator_lcm(const MultilinearPoly& p) {
  BigInt l = 1;
  for (const auto& [S, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  return l;
}

struct TermSink {
  const Split& sp;
  TermMode mode;
  MatmulBackend backend;
  u64 cap;
  std::vector<BigInt>& acc;  // sparse backend
  std::map<u64, BigInt> scaled;
  std::map<u64, Rational> coef;
  // dense backend
  std::vector<std::pair<u64, std::pair<Bitset, Bitset>>> stored;
  u64 terms = 0;
  u64 candidates = 0;

  void emit(u64 S, const Bitset& a, const Bitset& b) {
    if (++terms > cap)
      throw ValidationError("term count exceeds the memory cap of " + std::to_string(cap) + " terms");
    if (a.none() || b.none()) return;
    if (backend == MatmulBackend::Dense) {
      if (stored.size() >= 4096) throw ValidationError("dense backend limited to 4096 terms");
      stored.push_back({S, {a, b}});
      return;
    }
    const BigInt& c = scaled.at(S);
    std::vector<std::size_t> cols;
    for (std::size_t j = b.find_first(); j != Bitset::npos; j = b.find_next(j)) cols.push_back(j << sp.f_a);
    for (std::size_t i = a.find_first(); i != Bitset::npos; i = a.find_next(i))
      for (std::size_t j : cols) acc[i + j] += c;
  }
};

struct TermWalker {
  const std::vector<std::vector<OneRect>>& rects;
  std::vector<u64>& monos;
  int s;
  std::size_t za, zb;
  TermSink& sink;

  void rec(int i, std::size_t lo, std::size_t hi, const Bitset& a, const Bitset& b) {
    if (lo == hi) return;
    if (i == s) {
      sink.emit(monos[lo], a, b);
      return;
    }
    auto mid_it = std::partition(monos.begin() + lo, monos.begin() + hi, [&](u64 S) { return !((S >> i) & 1); });
    std::size_t mid = static_cast<std::size_t>(mid_it - monos.begin());
    rec(i + 1, lo, mid, a, b);
    if (mid == hi) return;
    for (const OneRect& r : rects[i]) {
      // rectangles that miss the restriction never yield a term, in either mode
      if (r.alpha[za].none() || r.beta[zb].none()) continue;
      ++sink.candidates;
      Bitset a2 = a & r.alpha[za];
      Bitset b2 = b & r.beta[zb];
      if (sink.mode == TermMode::Pruned && (a2.none() || b2.none())) continue;
      rec(i + 1, mid, hi, a2, b2);
    }
  }
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

MultilinearPoly counting_polynomial(const Formula& f, int nprime, int* nominal_degree) {
  Rational eps = frac(1, BigInt(3) << nprime);
  ComposedApprox ca = build_approx(f, eps);
  if (nominal_degree) *nominal_degree = ca.nominal_degree;
  return ca.expand(20);
}

FastCountResult count_sat_fast(const LeafDevice& d, const FastCountOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  const int n = d.num_vars();
  const int s = d.formula.size();
  if (static_cast<int>(d.protocols.size()) != s) throw ValidationError("one protocol per leaf required");
  Split sp = make_split(n, opt.nprime);

  FastCountResult res;
  res.nprime = opt.nprime;
  res.backend = backend_name(opt.backend);
  res.approx_eps = frac(1, BigInt(3) << opt.nprime);
  MultilinearPoly p = opt.polynomial ? *opt.polynomial : counting_polynomial(d.formula, opt.nprime, &res.nominal_degree);
  if (p.basis() != Basis::ZeroOne || p.num_vars() != s) throw ValidationError("polynomial must be zero_one over the leaves");
  res.degree = p.degree();
  res.support = p.support_size();

  std::vector<ProtocolPtr> protos;
  for (const auto& rp : d.protocols) {
    if (rp->randomness_bits() != 0) throw ValidationError("count_sat_fast needs deterministic leaf protocols");
    protos.push_back(rp->sample({}));
  }
  auto rects = leaf_rectangles(d, protos, sp, opt.check_leaves && d.deterministic());

  const std::size_t cells = std::size_t{1} << (sp.f_a + sp.f_b);
  BigInt L = denominator_lcm(p);
  std::vector<BigInt> acc(cells, BigInt(0));
  TermSink sink{sp, opt.term_mode, opt.backend, opt.memory_cap, acc, {}, {}, {}};
  for (const auto& [S, c] : p.terms()) {
    Rational scaled = c * L;  // exact: L is a multiple of every denominator
    sink.scaled[S] = scaled.get_num();
    sink.coef[S] = c;
  }
  std::vector<u64> monos;
  for (const auto& [S, c] : p.terms()) monos.push_back(S);

  Bitset full_a(std::size_t{1} << sp.f_a), full_b(std::size_t{1} << sp.f_b);
  full_a.set();
  full_b.set();
  for (u64 z = 0; z < (u64{1} << opt.nprime); ++z) {
    TermWalker w{rects, monos, s, static_cast<std::size_t>(z & low_mask(sp.t_a)),
                 static_cast<std::size_t>(z >> sp.t_a), sink};
    w.rec(0, 0, monos.size(), full_a, full_b);
  }
  res.terms = sink.terms;
  res.candidates = sink.candidates;

  std::vector<Rational> qprime(cells);
  if (opt.backend == MatmulBackend::SparseOuter) {
    for (std::size_t x = 0; x < cells; ++x) qprime[x] = frac(acc[x], L);
  } else {
    const std::size_t rows = std::size_t{1} << sp.f_a, cols = std::size_t{1} << sp.f_b;
    RationalMatrix A(rows, std::vector<Rational>(sink.stored.size(), Rational(0)));
    RationalMatrix B(sink.stored.size(), std::vector<Rational>(cols, Rational(0)));
    for (std::size_t t = 0; t < sink.stored.size(); ++t) {
      const auto& [S, ab] = sink.stored[t];
      for (std::size_t i = 0; i < rows; ++i)
        if (ab.first.test(i)) A[i][t] = sink.coef[S];
      for (std::size_t j = 0; j < cols; ++j)
        if (ab.second.test(j)) B[t][j] = 1;
    }
    RationalMatrix C = matmul(A, B);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) qprime[i + (j << sp.f_a)] = C[i][j];
  }

  res.count = 0;
  res.per_x.resize(cells);
  const Rational third(1, 3);
  for (std::size_t x = 0; x < cells; ++x) {
    bool tie = false;
    BigInt r = round_nearest(qprime[x], tie);
    Rational gap = abs_q(qprime[x] - r);
    if (gap > res.max_gap) res.max_gap = gap;
    if (tie || gap > third) {
      res.gap_violated = true;
      if (opt.strict_rounding)
        throw AssertionFailure("rounding gap exceeded 1/3 at free input " + std::to_string(x) +
                               ": Q'(x) = " + to_string(qprime[x]));
    }
    res.per_x[x] = r;
    res.count += r;
  }
  res.wall_ms = ms_since(t0);
  return res;
}

BigInt term_count_product_formula(const LeafDevice& d, const MultilinearPoly& p, int nprime) {
  Split sp = make_split(d.num_vars(), nprime);
  BigInt total = 0;
  for (u64 z = 0; z < (u64{1} << nprime); ++z) {
    u64 za = z & low_mask(sp.t_a), zb = z >> sp.t_a;
    std::vector<BigInt> leaves;
    for (const auto& rp : d.protocols) {
      ProtocolPtr proto = rp->sample({});
      long cnt = 0;
      for (const Rectangle& r : enumerate_leaves(*proto)) {
        if (!r.output) continue;
        bool ok_a = false, ok_b = false;
        for (u64 free = 0; free < (u64{1} << sp.f_a) && !ok_a; ++free)
          ok_a = rectangle_membership(*proto, 0, za | (free << sp.t_a), r.transcript);
        for (u64 free = 0; free < (u64{1} << sp.f_b) && !ok_b; ++free)
          ok_b = rectangle_membership(*proto, 1, zb | (free << sp.t_b), r.transcript);
        cnt += ok_a && ok_b;
      }
      leaves.push_back(BigInt(cnt));
    }
    for (const auto& [S, c] : p.terms()) {
      BigInt prod = 1;
      for (int i = 0; i < p.num_vars(); ++i)
        if ((S >> i) & 1) prod *= leaves[i];
      total += prod;
    }
  }
  return total;
}

RandomizedCountResult count_sat_randomized(const LeafDevice& d, int nprime, double confidence, u64 seed) {
  auto t0 = std::chrono::steady_clock::now();
  if (!(confidence > 0 && confidence < 1)) throw ValidationError("confidence must lie in (0, 1)");
  const int s = d.formula.size();
  Split sp = make_split(d.num_vars(), nprime);
  RandomizedCountResult res;
  res.eps_prime = frac(1, BigInt(3 * s) << nprime);

  std::vector<RandomizedPtr> reduced;
  Rational q = 0;
  for (const auto& rp : d.protocols) {
    RandomizedPtr r = reduce_error(rp, res.eps_prime);
    res.leaf_reps.push_back(r == rp ? 0 : majority_repetitions(res.eps_prime));
    q += r->error_bound() * (BigInt(1) << nprime);
    reduced.push_back(std::move(r));
  }
  res.run_failure = q;
  if (q >= Rational(1, 2)) throw AssertionFailure("per-run failure bound is not below 1/2");

  // Smallest odd number of runs whose per-x majority fails with probability at most
  // (1 - confidence) / 2^{free bits}; a union bound then covers every x.
  Rational target = Rational(1 - confidence) / Rational(BigInt(1) << (sp.f_a + sp.f_b));
  int runs = 1;
  if (q > 0)
    while (binomial_upper_tail(runs, q) > target) {
      runs += 2;
      if (runs > 100001) throw AssertionFailure("could not reach the requested confidence");
    }
  res.repetitions = runs;

  FastCountOptions opt;
  opt.nprime = nprime;
  opt.polynomial = counting_polynomial(d.formula, nprime);
  opt.check_leaves = false;
  opt.strict_rounding = false;

  Rng root(seed);
  std::vector<std::vector<BigInt>> per_run;
  for (int j = 0; j < runs; ++j) {
    Rng stream = root.split(static_cast<u64>(j));
    LeafDevice sampled{d.formula, {}};
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      Rng leaf_rng = stream.split(i);
      RandomString r = random_string(reduced[i]->randomness_bits(), leaf_rng);
      sampled.protocols.push_back(as_randomized(reduced[i]->sample(r)));
    }
    FastCountResult fr = count_sat_fast(sampled, opt);
    res.terms += fr.terms;
    per_run.push_back(std::move(fr.per_x));
  }
  res.count = 0;
  const std::size_t cells = per_run[0].size();
  for (std::size_t x = 0; x < cells; ++x) {
    std::map<BigInt, int> votes;
    for (const auto& v : per_run) ++votes[v[x]];
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it)
      if (it->second > best->second) best = it;
    res.count += best->first;
  }
  res.wall_ms = ms_since(t0);
  return res;
}

}  // namespace leafcomm
