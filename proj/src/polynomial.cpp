#include "leafcomm/polynomial.hpp"

#include "chebyshev_lp.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace leafcomm {

// ---------------------------------------------------------------- MultilinearPoly

void MultilinearPoly::add(u64 subset, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(subset, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational MultilinearPoly::coefficient(u64 subset) const {
  auto it = terms_.find(subset);
  return it == terms_.end() ? Rational(0) : it->second;
}

int MultilinearPoly::degree() const {
  int d = 0;
  for (const auto& [s, c] : terms_) d = std::max(d, popcount(s));
  return d;
}

Rational MultilinearPoly::l1_norm() const {
  Rational s = 0;
  for (const auto& [m, c] : terms_) s += abs_q(c);
  return s;
}

Rational MultilinearPoly::max_abs_coefficient() const {
  Rational s = 0;
  for (const auto& [m, c] : terms_) s = std::max(s, abs_q(c));
  return s;
}

Rational MultilinearPoly::eval(u64 x) const {
  Rational v = 0;
  if (basis_ == Basis::ZeroOne) {
    for (const auto& [s, c] : terms_)
      if ((s & x) == s) v += c;
  } else {
    for (const auto& [s, c] : terms_) {
      if (parity(s & x)) v -= c;
      else v += c;
    }
  }
  return v;
}

Rational MultilinearPoly::eval_at(const std::vector<Rational>& point) const {
  Rational v = 0;
  for (const auto& [s, c] : terms_) {
    Rational t = c;
    for (u64 r = s; r; r &= r - 1) t *= point[std::countr_zero(r)];
    v += t;
  }
  return v;
}

Rational eval_poly(const MultilinearPoly& p, u64 x) { return p.eval(x); }

std::string basis_name(Basis b) { return b == Basis::ZeroOne ? "zero_one" : "plus_minus"; }

// ---------------------------------------------------------------- cube transforms

namespace {

int cube_dimension(std::size_t size) {
  if (size == 0 || (size & (size - 1)) != 0) throw ValidationError("table length must be a power of two");
  return std::countr_zero(size);
}

void mobius_in_place(std::vector<Rational>& v, int m) {
  for (int i = 0; i < m; ++i) {
    std::size_t hb = std::size_t{1} << i;
    for (std::size_t x = 0; x < v.size(); ++x)
      if (x & hb) v[x] -= v[x ^ hb];
  }
}

void zeta_in_place(std::vector<Rational>& v, int m) {
  for (int i = 0; i < m; ++i) {
    std::size_t hb = std::size_t{1} << i;
    for (std::size_t x = 0; x < v.size(); ++x)
      if (x & hb) v[x] += v[x ^ hb];
  }
}

/// Walsh-Hadamard transform over integers: out[S] = sum_x v[x] (-1)^{|S & x|}.
void fwht(std::vector<std::int64_t>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1)
    for (std::size_t i = 0; i < v.size(); i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        std::int64_t a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

}  // namespace

MultilinearPoly multilinear_from_values(const std::vector<Rational>& values) {
  int m = cube_dimension(values.size());
  if (m > 24) throw ValidationError("interpolation limited to 24 variables");
  std::vector<Rational> v = values;
  mobius_in_place(v, m);
  MultilinearPoly p(Basis::ZeroOne, m);
  for (std::size_t s = 0; s < v.size(); ++s) p.add(s, v[s]);
  return p;
}

MultilinearPoly exact_multilinear(const std::vector<std::uint8_t>& table) {
  int m = cube_dimension(table.size());
  if (m > 20) throw ValidationError("exact interpolation limited to m <= 20");
  std::vector<std::int64_t> v(table.begin(), table.end());
  for (int i = 0; i < m; ++i) {
    std::size_t hb = std::size_t{1} << i;
    for (std::size_t x = 0; x < v.size(); ++x)
      if (x & hb) v[x] -= v[x ^ hb];
  }
  MultilinearPoly p(Basis::ZeroOne, m);
  for (std::size_t s = 0; s < v.size(); ++s)
    if (v[s] != 0) p.add(s, Rational(static_cast<long>(v[s])));
  return p;
}

std::vector<Rational> values_on_cube(const MultilinearPoly& p) {
  int n = p.num_vars();
  if (n > 24) throw ValidationError("cube evaluation limited to 24 variables");
  MultilinearPoly q = p.basis() == Basis::ZeroOne ? p : convert_basis(p);
  std::vector<Rational> v(std::size_t{1} << n);
  for (const auto& [s, c] : q.terms()) v[s] = c;
  zeta_in_place(v, n);
  return v;
}

Rational max_error(const MultilinearPoly& p, const std::vector<std::uint8_t>& table) {
  std::vector<Rational> v = values_on_cube(p);
  if (v.size() != table.size()) throw ValidationError("table size does not match polynomial arity");
  Rational worst = 0;
  for (std::size_t x = 0; x < v.size(); ++x) worst = std::max(worst, abs_q(v[x] - table[x]));
  return worst;
}

// ---------------------------------------------------------------- basis conversion

MultilinearPoly convert_basis(const MultilinearPoly& p) {
  const bool to_zero_one = p.basis() == Basis::PlusMinus;
  MultilinearPoly q(to_zero_one ? Basis::ZeroOne : Basis::PlusMinus, p.num_vars());
  for (const auto& [s, c] : p.terms()) {
    int k = popcount(s);
    // z_i = 1 - 2 y_i  or  y_i = (1 - z_i)/2
    Rational scale = to_zero_one ? Rational(1) : Rational(1, BigInt(1) << k);
    for (u64 t = s;; t = (t - 1) & s) {
      int j = popcount(t);
      Rational term = c * scale;
      if (to_zero_one) {
        BigInt f = BigInt(1) << j;
        term *= (j & 1) ? Rational(-f) : Rational(f);
      } else if (j & 1) {
        term = -term;
      }
      q.add(t, term);
      if (t == 0) break;
    }
  }
  int d = p.degree();
  int n = p.num_vars();
  Rational bound = p.max_abs_coefficient();
  BigInt nd = 1;
  for (int i = 0; i < d; ++i) nd *= n;
  bound *= Rational(nd * (BigInt(1) << (2 * d)));
  if (q.l1_norm() > bound)
    throw AssertionFailure("basis conversion violates |q|_1 <= n^d 4^d max|p(S)|");
  return q;
}

// ---------------------------------------------------------------- approx_base

namespace {

std::vector<u64> monomials_up_to(int m, int d) {
  std::vector<u64> out;
  for (int k = 0; k <= d; ++k)
    for (u64 s = 0; s < (u64{1} << m); ++s)
      if (popcount(s) == k) out.push_back(s);
  return out;
}

/// Exact max error of sum_S c_S [S subset x] against the table, or nullopt if above eps.
std::optional<MultilinearPoly> certify(const std::vector<std::uint8_t>& table, int m, const std::vector<u64>& monomials,
                                       const std::vector<Rational>& coef, const Rational& eps) {
  std::vector<Rational> v(table.size());
  for (std::size_t i = 0; i < monomials.size(); ++i) v[monomials[i]] = coef[i];
  zeta_in_place(v, m);
  for (std::size_t x = 0; x < v.size(); ++x)
    if (abs_q(v[x] - table[x]) > eps) return std::nullopt;
  MultilinearPoly p(Basis::ZeroOne, m);
  for (std::size_t i = 0; i < monomials.size(); ++i) p.add(monomials[i], coef[i]);
  return p;
}

/// Best rational approximation of x with denominator <= max_den (continued fractions).
Rational snap(double x, long max_den) {
  if (!std::isfinite(x)) return 0;
  double a = x;
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(a);
    if (std::abs(fl) > 1e15) break;
    long ai = static_cast<long>(fl);
    long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = a - fl;
    if (frac < 1e-14) break;
    a = 1.0 / frac;
  }
  if (k1 == 0) return Rational(static_cast<long>(std::nearbyint(x)));
  Rational q(h1, k1);
  q.canonicalize();
  return q;
}

Rational dyadic_round(double x, int k) {
  double scaled = std::ldexp(x, k);
  if (std::abs(scaled) > 9e15) return Rational(x);
  Rational q(BigInt(static_cast<long>(std::nearbyint(scaled))), BigInt(1) << k);
  q.canonicalize();
  return q;
}

struct FourierData {
  int m = 0;
  std::vector<std::int64_t> spectrum;  // G(S) = sum_x f(x) (-1)^{|S & x|}
};

FourierData fourier_of(const std::vector<std::uint8_t>& table, int m) {
  FourierData fd;
  fd.m = m;
  fd.spectrum.assign(table.begin(), table.end());
  fwht(fd.spectrum);
  return fd;
}

/// Degree-d truncation of the Fourier expansion if it is within eps everywhere.
std::optional<MultilinearPoly> truncation_if_feasible(const std::vector<std::uint8_t>& table, const FourierData& fd,
                                                      int d, const Rational& eps) {
  std::vector<std::int64_t> low(fd.spectrum.size());
  for (std::size_t s = 0; s < low.size(); ++s)
    if (popcount(s) <= d) low[s] = fd.spectrum[s];
  fwht(low);  // = 2^m * 2^m * p_d(x) / 2^m = 2^m p_d(x)
  const std::int64_t scale = std::int64_t{1} << fd.m;
  Rational lim = eps * Rational(scale);
  for (std::size_t x = 0; x < low.size(); ++x) {
    std::int64_t diff = low[x] - static_cast<std::int64_t>(table[x]) * scale;
    if (Rational(static_cast<long>(std::llabs(diff))) > lim) return std::nullopt;
  }
  std::vector<Rational> vals(low.size());
  for (std::size_t x = 0; x < low.size(); ++x) vals[x] = frac(BigInt(static_cast<long>(low[x])), BigInt(static_cast<long>(scale)));
  return multilinear_from_values(vals);
}

/// Dual certificate from the high-degree part of f: a lower bound on the best degree-d error.
Rational high_part_lower_bound(const std::vector<std::uint8_t>& table, const FourierData& fd, int d) {
  std::vector<std::int64_t> high(fd.spectrum.size());
  for (std::size_t s = 0; s < high.size(); ++s)
    if (popcount(s) > d) high[s] = fd.spectrum[s];
  fwht(high);
  std::int64_t num = 0, den = 0;
  for (std::size_t x = 0; x < high.size(); ++x) {
    num += table[x] ? high[x] : 0;
    den += std::llabs(high[x]);
  }
  if (den == 0) return 0;
  return frac(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
}

struct CacheKey {
  std::string table;
  std::string eps;
  bool operator<(const CacheKey& o) const { return std::tie(table, eps) < std::tie(o.table, o.eps); }
};

std::mutex cache_mutex;
std::map<CacheKey, BaseApprox> base_cache;

}  // namespace

std::optional<MultilinearPoly> lp_feasible(const std::vector<std::uint8_t>& table, int d, const Rational& eps,
                                           LpStats* stats) {
  int m = cube_dimension(table.size());
  if (m > 16) throw ValidationError("approx_base limited to m <= 16 inputs");
  std::vector<u64> mons = monomials_up_to(m, std::min(d, m));
  std::vector<double> f(table.begin(), table.end());
  double target = eps.get_d();
  double accept = target - std::max(1e-9, 1e-6 * target);
  auto res = detail::solve_chebyshev(m, f, mons, target, accept);
  if (stats) {
    ++stats->lp_solves;
    stats->simplex_iterations += res.iterations;
  }
  using S = detail::ChebyshevOutcome::Status;
  if (res.status == S::AboveTarget || res.status == S::IterationLimit) return std::nullopt;
  std::vector<Rational> coef(mons.size());
  auto attempt = [&](auto&& rounder) -> std::optional<MultilinearPoly> {
    for (std::size_t i = 0; i < mons.size(); ++i) coef[i] = rounder(res.coef[i]);
    if (stats) ++stats->exact_checks;
    return certify(table, m, mons, coef, eps);
  };
  for (long den : {64L, 4096L, 1L << 20}) {
    if (auto p = attempt([&](double x) { return snap(x, den); })) return p;
  }
  if (res.upper < target) {
    double slack = target - res.upper;
    int k = std::clamp(static_cast<int>(std::ceil(std::log2(4.0 * mons.size() / slack))), 1, 52);
    if (auto p = attempt([&](double x) { return dyadic_round(x, k); })) return p;
    if (auto p = attempt([&](double x) { return Rational(x); })) return p;
  }
  return std::nullopt;
}

BaseApprox approx_base(const std::vector<std::uint8_t>& table, const Rational& eps) {
  int m = cube_dimension(table.size());
  if (m > 16) throw ValidationError("approx_base limited to m <= 16 inputs");
  if (eps < 0) throw ValidationError("approximation error must be nonnegative");
  CacheKey key{std::string(table.begin(), table.end()), to_string(eps)};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = base_cache.find(key);
    if (it != base_cache.end()) return it->second;
  }

  BaseApprox out;
  MultilinearPoly exact = exact_multilinear(table);
  int hi = exact.degree();
  std::optional<MultilinearPoly> best = exact;
  if (eps > 0 && hi > 0) {
    FourierData fd = fourier_of(table, m);
    int lo = 0;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      std::optional<MultilinearPoly> cand;
      if (auto tr = truncation_if_feasible(table, fd, mid, eps)) {
        cand = std::move(tr);
        ++out.stats.certified_by_bounds;
      } else if (high_part_lower_bound(table, fd, mid) > eps) {
        ++out.stats.certified_by_bounds;
      } else {
        cand = lp_feasible(table, mid, eps, &out.stats);
      }
      if (cand) {
        hi = mid;
        best = std::move(cand);
      } else {
        lo = mid + 1;
      }
    }
  }
  out.poly = std::move(*best);
  out.degree = out.poly.degree();
  out.error = max_error(out.poly, table);
  if (out.error > eps) throw AssertionFailure("approx_base produced a polynomial above the error target");
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    base_cache.emplace(std::move(key), out);
  }
  return out;
}

BaseApprox approx_base(const Skeleton& piece, const Rational& eps) {
  if (piece.arity() > 16) throw ValidationError("approx_base limited to pieces with at most 16 inputs");
  return approx_base(piece.truth_table(), eps);
}

// ---------------------------------------------------------------- amplification

namespace {

BigInt binomial(int n, int k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

/// Pr[Bin(r, y) > r/2] for odd r.
Rational majority_tail(int r, const Rational& y) {
  Rational s = 0;
  Rational one_minus = 1 - y;
  for (int i = (r + 1) / 2; i <= r; ++i) {
    Rational t = Rational(binomial(r, i));
    for (int a = 0; a < i; ++a) t *= y;
    for (int b = 0; b < r - i; ++b) t *= one_minus;
    s += t;
  }
  return s;
}

}  // namespace

std::vector<Rational> majority_amplifier(int r) {
  if (r < 1 || r % 2 == 0) throw ValidationError("amplifier degree must be odd and positive");
  std::vector<Rational> c(r + 1);
  for (int i = (r + 1) / 2; i <= r; ++i) {
    BigInt ci = binomial(r, i);
    for (int j = 0; j <= r - i; ++j) {
      BigInt t = ci * binomial(r - i, j);
      if (j & 1) c[i + j] -= Rational(t);
      else c[i + j] += Rational(t);
    }
  }
  return c;
}

Rational eval_univariate(const std::vector<Rational>& coeffs, const Rational& y) {
  Rational v = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * y + coeffs[k];
  return v;
}

int amplifier_degree(const Rational& in_error, const Rational& eps) {
  if (in_error >= Rational(1, 2)) throw ValidationError("amplifier input error must be below 1/2");
  if (eps <= 0) throw ValidationError("amplifier target error must be positive");
  Rational y = 2 * in_error / (1 + 2 * in_error);
  for (int r = 1;; r += 2)
    if (majority_tail(r, y) <= eps) return r;
}

Rational Amplifier::apply(const Rational& v) const {
  return eval_univariate(coeffs, (v + in_error) / (1 + 2 * in_error));
}

Amplifier make_amplifier(const Rational& in_error, const Rational& eps) {
  Amplifier a;
  a.in_error = in_error;
  a.r = amplifier_degree(in_error, eps);
  a.coeffs = majority_amplifier(a.r);
  a.out_error = majority_tail(a.r, 2 * in_error / (1 + 2 * in_error));
  return a;
}

MultilinearPoly amplify(const MultilinearPoly& p, const Rational& eps, const Rational& in_error) {
  if (eps >= in_error) return p;
  if (p.num_vars() > 20) throw ValidationError("amplify expands on the cube and is limited to 20 variables");
  Amplifier a = make_amplifier(in_error, eps);
  std::vector<Rational> v = values_on_cube(p);
  for (auto& x : v) x = a.apply(x);
  MultilinearPoly q = multilinear_from_values(v);
  if (p.basis() == Basis::PlusMinus) q = convert_basis(q);
  return q;
}

// ---------------------------------------------------------------- composition

namespace {

/// Multilinear extension of a cube table at a point where the Boolean slots come from `fixed`.
Rational fold_eval(const std::vector<Rational>& table, const Skeleton& sk, const std::vector<std::uint8_t>& leaves,
                   const std::vector<Rational>& ph) {
  u64 base = 0;
  std::vector<int> free_pos;
  for (int i = 0; i < sk.arity(); ++i) {
    const Slot& s = sk.slots[i];
    if (s.placeholder) free_pos.push_back(i);
    else if (leaves[s.index]) base |= u64{1} << i;
  }
  const std::size_t k = free_pos.size();
  std::vector<Rational> v(std::size_t{1} << k);
  for (std::size_t j = 0; j < v.size(); ++j) {
    u64 idx = base;
    for (std::size_t b = 0; b < k; ++b)
      if ((j >> b) & 1) idx |= u64{1} << free_pos[b];
    v[j] = table[idx];
  }
  for (std::size_t b = 0; b < k; ++b) {
    const Rational& q = ph[sk.slots[free_pos[b]].index];
    std::size_t half = v.size() >> (b + 1);
    for (std::size_t j = 0; j < half; ++j) v[j] = v[2 * j] + q * (v[2 * j + 1] - v[2 * j]);
  }
  return v[0];
}

int composed_degree(const MultilinearPoly& p, const Skeleton& sk, const std::vector<int>& ph_degree) {
  int best = 0;
  for (const auto& [s, c] : p.terms()) {
    int d = 0;
    for (u64 r = s; r; r &= r - 1) {
      const Slot& sl = sk.slots[std::countr_zero(r)];
      d += sl.placeholder ? ph_degree[sl.index] : 1;
    }
    best = std::max(best, d);
  }
  return best;
}

Rational shifted(const Rational& v, const Rational& e) { return e == 0 ? v : (v + e) / (1 + 2 * e); }

}  // namespace

std::vector<Rational> ComposedApprox::placeholder_values(const std::vector<std::uint8_t>& leaf_values) const {
  std::vector<Rational> ph(pieces.size());
  for (std::size_t j = 0; j < tree.pieces.size(); ++j) {
    const Piece& pc = tree.pieces[j];
    Rational q = fold_eval(piece_tables[j], pc.body, leaf_values, ph);
    ph[pc.placeholder] = shifted(q, pieces[j].error);
  }
  return ph;
}

Rational ComposedApprox::eval_composed(const std::vector<std::uint8_t>& leaf_values) const {
  std::vector<Rational> ph = placeholder_values(leaf_values);
  return fold_eval(top_table, tree.top, leaf_values, ph);
}

Rational ComposedApprox::eval_leaves(const std::vector<std::uint8_t>& leaf_values) const {
  Rational v = eval_composed(leaf_values);
  return amplifier ? amplifier->apply(v) : v;
}

MultilinearPoly ComposedApprox::expand(int max_vars) const {
  int s = num_leaves();
  if (s > max_vars || s > 24) throw ValidationError("expansion over " + std::to_string(s) + " leaves exceeds the limit");
  std::vector<Rational> v(std::size_t{1} << s);
  std::vector<std::uint8_t> lv(s);
  for (u64 y = 0; y < v.size(); ++y) {
    for (int i = 0; i < s; ++i) lv[i] = (y >> i) & 1;
    v[y] = eval_leaves(lv);
  }
  return multilinear_from_values(v);
}

MultilinearPoly ComposedApprox::input_poly(const Formula& f) const {
  int n = f.num_vars();
  if (n > 20) throw ValidationError("input expansion limited to n <= 20");
  std::vector<Rational> v(std::size_t{1} << n);
  for (u64 x = 0; x < v.size(); ++x) v[x] = eval_leaves(f.leaf_values(x));
  return multilinear_from_values(v);
}

Rational ComposedApprox::max_input_error(const Formula& f) const {
  int n = f.num_vars();
  if (n > 24) throw ValidationError("exhaustive verification limited to n <= 24");
  Rational worst = 0;
  for (u64 x = 0; x < (u64{1} << n); ++x) {
    Rational d = abs_q(eval_leaves(f.leaf_values(x)) - (f.eval(x) ? 1 : 0));
    if (d > worst) worst = d;
  }
  return worst;
}

ComposedApprox compose(const CompositionTree& tree, std::vector<BaseApprox> pieces, BaseApprox top,
                       const ErrorBudget& budget) {
  if (pieces.size() != tree.pieces.size()) throw ValidationError("piece count does not match the composition tree");
  if (top.poly.num_vars() != tree.top.arity()) throw ValidationError("top polynomial arity mismatch");
  ComposedApprox ca;
  ca.tree = tree;
  ca.budget = budget;
  std::vector<int> ph_degree(pieces.size(), 0);
  Rational wrong = 0;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    if (pieces[j].poly.num_vars() != tree.pieces[j].body.arity())
      throw ValidationError("piece polynomial arity mismatch");
    if (budget.piece_eps > 0 && pieces[j].error > budget.piece_eps)
      throw ValidationError("piece approximation exceeds its error budget");
    ca.piece_tables.push_back(values_on_cube(pieces[j].poly));
    ph_degree[tree.pieces[j].placeholder] = composed_degree(pieces[j].poly, tree.pieces[j].body, ph_degree);
    const Rational& e = pieces[j].error;
    wrong += 2 * e / (1 + 2 * e);
    ca.stats.lp_solves += pieces[j].stats.lp_solves;
    ca.stats.simplex_iterations += pieces[j].stats.simplex_iterations;
  }
  ca.top_table = values_on_cube(top.poly);
  ca.nominal_degree = composed_degree(top.poly, tree.top, ph_degree);
  ca.compose_error = top.error + wrong;
  ca.error_bound = ca.compose_error;
  ca.stats.lp_solves += top.stats.lp_solves;
  ca.stats.simplex_iterations += top.stats.simplex_iterations;
  ca.pieces = std::move(pieces);
  ca.top = std::move(top);
  return ca;
}

MultilinearPoly compose_expanded(const CompositionTree& tree, const std::vector<MultilinearPoly>& piece_polys,
                                 const MultilinearPoly& top_poly, const ErrorBudget& budget) {
  std::vector<BaseApprox> pieces;
  for (std::size_t j = 0; j < piece_polys.size(); ++j) {
    BaseApprox b;
    b.poly = piece_polys[j].basis() == Basis::ZeroOne ? piece_polys[j] : convert_basis(piece_polys[j]);
    b.degree = b.poly.degree();
    if (j < tree.pieces.size()) b.error = max_error(b.poly, tree.pieces[j].body.truth_table());
    pieces.push_back(std::move(b));
  }
  BaseApprox top;
  top.poly = top_poly.basis() == Basis::ZeroOne ? top_poly : convert_basis(top_poly);
  top.degree = top.poly.degree();
  top.error = max_error(top.poly, tree.top.truth_table());
  return compose(tree, std::move(pieces), std::move(top), budget).expand();
}

ComposedApprox build_approx(const Skeleton& sk, const Rational& eps) {
  if (eps < 0) throw ValidationError("approximation error must be nonnegative");
  int s = sk.arity();
  int t = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(s))));
  while (t * t < s) ++t;
  while (t > 1 && (t - 1) * (t - 1) >= s) --t;
  CompositionTree tree = decompose(sk, t);
  ErrorBudget budget;
  budget.piece_eps = Rational(1, 20 * static_cast<long>(std::max<std::size_t>(1, tree.pieces.size())));
  budget.final_eps = eps;
  std::vector<BaseApprox> pieces;
  for (const Piece& pc : tree.pieces) pieces.push_back(approx_base(pc.body, budget.piece_eps));
  BaseApprox top = approx_base(tree.top, budget.top_eps);
  ComposedApprox ca = compose(tree, std::move(pieces), std::move(top), budget);
  if (ca.compose_error > Rational(1, 3)) throw AssertionFailure("composition error bound exceeds 1/3");
  if (ca.compose_error > eps) {
    ca.amplifier = make_amplifier(ca.compose_error, eps);
    ca.error_bound = ca.amplifier->out_error;
    ca.nominal_degree *= ca.amplifier->r;
  }
  return ca;
}

ComposedApprox build_approx(const Formula& f, const Rational& eps) { return build_approx(f.skeleton(), eps); }

double degree_constant(int degree, int s, const Rational& eps) {
  double ls = std::max(1.0, std::log2(static_cast<double>(s)));
  double le = std::max(1.0, std::log2(1.0 / eps.get_d()));
  return degree / (std::sqrt(static_cast<double>(s)) * ls * le);
}

}  // namespace leafcomm
