#include "leafcomm/prg.hpp"

#include "leafcomm/hardness.hpp"

#include <algorithm>
#include <cmath>

namespace leafcomm {

Bits bits_from_u64(u64 v, int len) {
  Bits b(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) b[i] = (i < 64) ? static_cast<std::uint8_t>((v >> i) & 1) : 0;
  return b;
}

u64 bits_to_u64(const Bits& b) {
  if (b.size() > 64) throw ValidationError("bit string longer than 64 bits");
  u64 v = 0;
  for (std::size_t i = 0; i < b.size(); ++i) v |= u64{b[i] & 1u} << i;
  return v;
}

// ---------------------------------------------------------------- GF(2^l)

namespace {

// Exponents below l of x^l + ...: a trinomial x^l + x^a + 1 when one exists, else a pentanomial.
constexpr u64 kIrreducible[65] = {
    0,       0x1,     0x3,    0x3,   0x3,    0x5,        0x3,  0x3,    0x1b, 0x3,   0x9,   0x5,   0x9,
    0x1b,    0x21,    0x3,    0x2b,  0x9,    0x9,        0x27, 0x9,    0x5,  0x3,   0x21,  0x1b,  0x9,
    0x1b,    0x27,    0x3,    0x5,   0x3,    0x9,        0x8d, 0x401,  0x81, 0x5,   0x201, 0x53,  0x63,
    0x11,    0x39,    0x9,    0x81,  0x59,   0x21,       0x1b, 0x3,    0x21, 0x2d,  0x201, 0x1d,  0x4b,
    0x9,     0x47,    0x201,  0x81,  0x95,   0x11,       0x80001, 0x95, 0x3, 0x27, 0x20000001, 0x3, 0x1b};

Bits slice(const Bits& b, std::size_t from, std::size_t len) {
  return Bits(b.begin() + static_cast<std::ptrdiff_t>(from), b.begin() + static_cast<std::ptrdiff_t>(from + len));
}

void append(Bits& out, const Bits& b) { out.insert(out.end(), b.begin(), b.end()); }

}  // namespace

u64 irreducible_low_terms(int l) {
  if (l < 1 || l > 64) throw ValidationError("field degree must be in [1, 64], got " + std::to_string(l));
  return kIrreducible[l];
}

Gf2Field::Gf2Field(int l) : l_(l), low_(irreducible_low_terms(l)) {}

u64 Gf2Field::mul(u64 a, u64 b) const {
  const u64 top = u64{1} << (l_ - 1);
  const u64 m = mask();
  u64 r = 0;
  a &= m;
  b &= m;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    bool carry = (a & top) != 0;
    a = (a << 1) & m;
    if (carry) a ^= low_;
  }
  return r;
}

// ---------------------------------------------------------------- small-bias

int small_bias_ell(int n, const Rational& delta) {
  if (n < 1) throw ValidationError("small-bias output length must be positive");
  if (delta <= 0 || delta > 1) throw ValidationError("small-bias delta must be in (0, 1]");
  Rational need = Rational(n) / delta;
  int l = 1;
  while (Rational(BigInt(1) << l) < need) ++l;
  if (l > 64) throw ValidationError("small-bias needs GF(2^" + std::to_string(l) + "); supported up to 2^64");
  return l;
}

u64 small_bias_expand64(u64 seed, int n, int ell) {
  if (n > 64 || ell < 1 || ell > 32) throw ValidationError("64-bit expansion needs n <= 64 and l <= 32");
  Gf2Field field(ell);
  const u64 a = seed & field.mask();
  const u64 b = (seed >> ell) & field.mask();
  u64 out = 0, pw = a;
  for (int j = 0; j < n; ++j) {
    if (parity(pw & b)) out |= u64{1} << j;
    pw = field.mul(pw, a);
  }
  return out;
}

Bits small_bias_expand(const Bits& seed, int n, const Rational& delta) {
  const int l = small_bias_ell(n, delta);
  if (static_cast<int>(seed.size()) != 2 * l)
    throw ValidationError("small-bias seed must have " + std::to_string(2 * l) + " bits");
  Gf2Field field(l);
  const u64 a = bits_to_u64(slice(seed, 0, l));
  const u64 b = bits_to_u64(slice(seed, l, l));
  Bits out(static_cast<std::size_t>(n));
  u64 pw = a;
  for (int j = 0; j < n; ++j) {
    out[j] = parity(pw & b);
    pw = field.mul(pw, a);
  }
  return out;
}

Rational small_bias_max_bias(int n, int ell) {
  if (n < 1 || n > 20 || ell < 1 || ell > 16) throw ValidationError("exhaustive bias needs n <= 20 and l <= 16");
  Gf2Field field(ell);
  std::vector<std::int64_t> hist(std::size_t{1} << n, 0);
  for (u64 a = 0; a < (u64{1} << ell); ++a) {
    // column i: bit j is bit i of a^(j+1), so G(a, b) is the xor of the columns picked by b
    std::vector<u64> col(static_cast<std::size_t>(ell), 0);
    u64 pw = a;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < ell; ++i)
        if ((pw >> i) & 1) col[i] |= u64{1} << j;
      pw = field.mul(pw, a);
    }
    u64 y = 0;
    ++hist[0];
    for (u64 g = 1; g < (u64{1} << ell); ++g) {
      y ^= col[static_cast<std::size_t>(std::countr_zero(g))];  // Gray-code step
      ++hist[y];
    }
  }
  for (std::size_t h = 1; h < hist.size(); h <<= 1)
    for (std::size_t i = 0; i < hist.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        std::int64_t u = hist[j], v = hist[j + h];
        hist[j] = u + v;
        hist[j + h] = u - v;
      }
  std::int64_t worst = 0;
  for (std::size_t mask = 1; mask < hist.size(); ++mask) worst = std::max(worst, std::abs(hist[mask]));
  return frac(BigInt(static_cast<long>(worst)), BigInt(1) << (2 * ell));
}

double schedule_exponent(int s, const Rational& eps, double c) {
  if (s < 1 || eps <= 0 || eps >= 1 || c <= 0) throw ValidationError("schedule needs s >= 1, 0 < eps < 1, c > 0");
  double logs = std::max(1.0, std::log2(static_cast<double>(s)));
  return c * std::sqrt(static_cast<double>(s)) * logs * std::log2(1.0 / eps.get_d());
}

int schedule_ell(int n, int s, const Rational& eps, double c) {
  double e = std::log2(static_cast<double>(n)) + schedule_exponent(s, eps, c);
  int l = std::max(1, static_cast<int>(std::ceil(e - 1e-12)));
  if (l > 64) throw ValidationError("schedule needs GF(2^" + std::to_string(l) + "); supported up to 2^64");
  return l;
}

// ---------------------------------------------------------------- extractors

std::string extractor_backend_name(ExtractorBackend b) {
  return b == ExtractorBackend::ToeplitzHash ? "toeplitz_hash" : "field_hash";
}

ExtractorBackend parse_extractor_backend(const std::string& name) {
  if (name == "toeplitz_hash" || name == "toeplitz") return ExtractorBackend::ToeplitzHash;
  if (name == "field_hash" || name == "field" || name == "extension_point") return ExtractorBackend::FieldHash;
  throw ValidationError("unknown extractor backend '" + name + "'");
}

int ExtractorSpec::seed_bits() const {
  if (hash_bits == 0) return r;
  return backend == ExtractorBackend::ToeplitzHash ? r - 1 : r - hash_bits;
}

int ExtractorSpec::max_hash_bits() const {
  if (backend == ExtractorBackend::ToeplitzHash) return std::max(0, r - 1);
  return std::min(r / 2, 64);
}

Rational ExtractorSpec::error_bound() const {
  if (hash_bits == 0) return 0;
  // 1/2 sqrt(2^{m-r}); for odd r - m use 1/sqrt(2) < 17/24
  int gap = r - hash_bits;
  Rational b = frac(1, BigInt(1) << (1 + gap / 2));
  if (gap % 2) b *= Rational(17, 24);
  return b;
}

Bits extract(const ExtractorSpec& spec, const Bits& x, const Bits& z) {
  const int r = spec.r, m = spec.hash_bits;
  if (static_cast<int>(x.size()) != r || static_cast<int>(z.size()) != spec.seed_bits())
    throw ValidationError("extractor input lengths do not match its configuration");
  if (m == 0) return z;
  const int w = r - m;  // hashed part x1
  Bits h(static_cast<std::size_t>(m));
  if (spec.backend == ExtractorBackend::ToeplitzHash) {
    // T[i][j] = z[i - j + w - 1], an m x w Toeplitz matrix
    for (int i = 0; i < m; ++i) {
      std::uint8_t acc = x[w + i];
      for (int j = 0; j < w; ++j) acc ^= z[i - j + w - 1] & x[j];
      h[i] = acc;
    }
  } else {
    Gf2Field field(w);
    u64 prod = field.mul(bits_to_u64(slice(z, 0, w)), bits_to_u64(slice(x, 0, w)));
    for (int i = 0; i < m; ++i) h[i] = static_cast<std::uint8_t>(((prod >> i) & 1) ^ x[w + i]);
  }
  Bits out = h;
  append(out, slice(z, 0, w));
  return out;
}

// ---------------------------------------------------------------- INW

namespace {

InwConfig inw_skeleton(int n, int k, int dprime, ExtractorBackend backend) {
  if (k < 2 || (k & (k - 1)) != 0) throw ValidationError("INW needs k a power of two, k >= 2");
  if (n < k || n % k != 0) throw ValidationError("INW needs k to divide n");
  if (dprime < 0) throw ValidationError("D' must be nonnegative");
  InwConfig c;
  c.n = n;
  c.k = k;
  c.t = std::countr_zero(static_cast<unsigned>(k));
  c.dprime = dprime;
  c.backend = backend;
  return c;
}

Rational hybrid_factor(const InwConfig& c) {
  BigInt f = 1;
  for (int i = 0; i < c.t; ++i) f *= 3;
  return Rational(f << c.dprime);
}

void finish(InwConfig& c) {
  c.delta_prime = 0;
  c.seed_len = c.block();
  for (const auto& e : c.levels) {
    if (e.error_bound() > c.delta_prime) c.delta_prime = e.error_bound();
    c.seed_len += e.seed_bits();
  }
  c.delta = c.delta_prime * hybrid_factor(c);
}

}  // namespace

InwConfig inw_config(int n, int k, int dprime, const Rational& delta, ExtractorBackend backend) {
  InwConfig c = inw_skeleton(n, k, dprime, backend);
  if (delta <= 0) throw ValidationError("INW delta must be positive");
  const Rational target = delta / hybrid_factor(c);
  int r = c.block();
  for (int i = 0; i < c.t; ++i) {
    ExtractorSpec e{r, 0, backend};
    for (int m = e.max_hash_bits(); m >= 1; --m) {
      if (backend == ExtractorBackend::FieldHash && r - m > 64) break;
      ExtractorSpec trial{r, m, backend};
      if (trial.error_bound() <= target) {
        e = trial;
        break;
      }
    }
    c.levels.push_back(e);
    r += e.seed_bits();
  }
  finish(c);
  return c;
}

InwConfig inw_config_with_hash_bits(int n, int k, int dprime, const std::vector<int>& hash_bits,
                                    ExtractorBackend backend) {
  InwConfig c = inw_skeleton(n, k, dprime, backend);
  if (static_cast<int>(hash_bits.size()) != c.t)
    throw ValidationError("need one hash length per level (" + std::to_string(c.t) + ")");
  int r = c.block();
  for (int i = 0; i < c.t; ++i) {
    ExtractorSpec e{r, hash_bits[i], backend};
    if (e.hash_bits < 0 || e.hash_bits > e.max_hash_bits() ||
        (backend == ExtractorBackend::FieldHash && e.hash_bits > 0 && r - e.hash_bits > 64))
      throw ValidationError("level " + std::to_string(i) + ": " + std::to_string(e.hash_bits) +
                            " hashed bits exceed what an r=" + std::to_string(r) + " source supports under " +
                            extractor_backend_name(backend) + " (entropy margin r - m must be >= " +
                            std::to_string(r - e.max_hash_bits()) + ")");
    c.levels.push_back(e);
    r += e.seed_bits();
  }
  finish(c);
  return c;
}

namespace {

Bits inw_level(const Bits& seed, const InwConfig& cfg, int i) {
  if (i == 0) return seed;
  const ExtractorSpec& e = cfg.levels[i - 1];
  Bits a = slice(seed, 0, e.r);
  Bits z = slice(seed, e.r, e.seed_bits());
  Bits out = inw_level(a, cfg, i - 1);
  append(out, inw_level(extract(e, a, z), cfg, i - 1));
  return out;
}

}  // namespace

Bits inw_expand(const Bits& seed, const InwConfig& cfg) {
  if (static_cast<int>(seed.size()) != cfg.seed_len)
    throw ValidationError("INW seed must have " + std::to_string(cfg.seed_len) + " bits");
  return inw_level(seed, cfg, cfg.t);
}

// ---------------------------------------------------------------- GIP stretch

Bits gip_stretch_expand(const Bits& seed, int m, int t, int k) {
  if (m < 1 || t < 1 || k < 1 || m % k != 0 || t % k != 0)
    throw ValidationError("GIP stretch needs k to divide both m and t");
  if (static_cast<int>(seed.size()) != m * t)
    throw ValidationError("GIP stretch seed must have m*t = " + std::to_string(m * t) + " bits");
  const int b = m / k, per = t / k;
  Bits out;
  out.reserve(static_cast<std::size_t>(m * t + t));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < t; ++j) append(out, slice(seed, static_cast<std::size_t>(j * m + i * b), b));
    for (int j = i * per; j < (i + 1) * per; ++j) out.push_back(gip(k, slice(seed, static_cast<std::size_t>(j * m), m)));
  }
  return out;
}

// ---------------------------------------------------------------- generators

std::string generator_kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::SmallBias: return "small_bias";
    case GeneratorKind::Inw: return "inw";
    case GeneratorKind::GipStretch: return "gip_stretch";
  }
  return "?";
}

Generator small_bias_generator_ell(int n, int ell) {
  if (n < 1 || ell < 1 || ell > 64) throw ValidationError("small-bias needs n >= 1 and 1 <= l <= 64");
  Generator g;
  g.kind = GeneratorKind::SmallBias;
  g.ell = ell;
  g.seed_len = 2 * ell;
  g.out_len = n;
  g.delta = frac(n, BigInt(1) << ell);
  return g;
}

Generator small_bias_generator(int n, const Rational& delta) { return small_bias_generator_ell(n, small_bias_ell(n, delta)); }

Generator inw_generator(const InwConfig& cfg) {
  Generator g;
  g.kind = GeneratorKind::Inw;
  g.seed_len = cfg.seed_len;
  g.out_len = cfg.n;
  g.delta = cfg.delta;
  g.inw = cfg;
  return g;
}

Generator gip_stretch_generator(int m, int t, int k) {
  if (m < 1 || t < 1 || k < 1 || m % k != 0 || t % k != 0)
    throw ValidationError("GIP stretch needs k to divide both m and t");
  Generator g;
  g.kind = GeneratorKind::GipStretch;
  g.m = m;
  g.t = t;
  g.k = k;
  g.seed_len = m * t;
  g.out_len = m * t + t;
  return g;
}

Bits Generator::expand(const Bits& seed) const {
  if (static_cast<int>(seed.size()) != seed_len)
    throw ValidationError("seed must have " + std::to_string(seed_len) + " bits");
  switch (kind) {
    case GeneratorKind::SmallBias: {
      Gf2Field field(ell);
      const u64 a = bits_to_u64(slice(seed, 0, ell)), b = bits_to_u64(slice(seed, ell, ell));
      Bits out(static_cast<std::size_t>(out_len));
      u64 pw = a;
      for (int j = 0; j < out_len; ++j) {
        out[j] = parity(pw & b);
        pw = field.mul(pw, a);
      }
      return out;
    }
    case GeneratorKind::Inw: return inw_expand(seed, *inw);
    case GeneratorKind::GipStretch: return gip_stretch_expand(seed, m, t, k);
  }
  return {};
}

u64 Generator::expand64(u64 seed) const {
  if (seed_len > 64 || out_len > 64) throw ValidationError("64-bit expansion needs seed and output of at most 64 bits");
  if (kind == GeneratorKind::SmallBias) return small_bias_expand64(seed, out_len, ell);
  return bits_to_u64(expand(bits_from_u64(seed, seed_len)));
}

// ---------------------------------------------------------------- fooling

FoolingGap fooling_gap(const Generator& g, const std::function<bool(u64)>& f, u64 seed, u64 samples) {
  if (g.out_len > 64) throw ValidationError("fooling gap evaluates functions on at most 64 bits");
  FoolingGap r;
  Rng rng(seed);
  Rng seeds = rng.split(0), inputs = rng.split(1);
  const bool seeds_exhaustive = g.seed_len <= 24;
  const bool inputs_exhaustive = g.out_len <= 20;
  double pg, pu;
  if (seeds_exhaustive) {
    u64 hits = 0;
    for (u64 z = 0; z < (u64{1} << g.seed_len); ++z) hits += f(g.expand64(z));
    r.p_generator = frac(BigInt(static_cast<unsigned long>(hits)), BigInt(1) << g.seed_len);
    pg = r.p_generator.get_d();
  } else {
    u64 hits = 0;
    for (u64 i = 0; i < samples; ++i) {
      Bits z(static_cast<std::size_t>(g.seed_len));
      for (auto& bit : z) bit = seeds.bit();
      hits += f(bits_to_u64(g.expand(z)));
    }
    pg = static_cast<double>(hits) / static_cast<double>(samples);
  }
  if (inputs_exhaustive) {
    u64 hits = 0;
    for (u64 x = 0; x < (u64{1} << g.out_len); ++x) hits += f(x);
    r.p_uniform = frac(BigInt(static_cast<unsigned long>(hits)), BigInt(1) << g.out_len);
    pu = r.p_uniform.get_d();
  } else {
    u64 hits = 0;
    for (u64 i = 0; i < samples; ++i) hits += f(inputs.next() & low_mask(g.out_len));
    pu = static_cast<double>(hits) / static_cast<double>(samples);
  }
  r.exact = seeds_exhaustive && inputs_exhaustive;
  if (r.exact) {
    r.gap = abs_q(r.p_generator - r.p_uniform);
    r.estimate = r.gap.get_d();
  } else {
    r.estimate = std::fabs(pg - pu);
    r.samples = samples;
    // each sampled side contributes variance <= 1/(4 N); z_{0.995} = 2.5758
    int sampled = (seeds_exhaustive ? 0 : 1) + (inputs_exhaustive ? 0 : 1);
    r.half_width = 2.5758 * std::sqrt(sampled / (4.0 * static_cast<double>(samples)));
  }
  return r;
}

// ---------------------------------------------------------------- seed lengths

SeedModel parse_seed_model(const std::string& name) {
  if (name == "formula_xor") return SeedModel::FormulaXor;
  if (name == "formula_ltf") return SeedModel::FormulaLtf;
  if (name == "formula_sym") return SeedModel::FormulaSym;
  if (name == "formula_nih") return SeedModel::FormulaNih;
  if (name == "formula_nof") return SeedModel::FormulaNof;
  throw ValidationError("unknown model '" + name + "'");
}

std::string seed_model_name(SeedModel m) {
  switch (m) {
    case SeedModel::FormulaXor: return "formula_xor";
    case SeedModel::FormulaLtf: return "formula_ltf";
    case SeedModel::FormulaSym: return "formula_sym";
    case SeedModel::FormulaNih: return "formula_nih";
    case SeedModel::FormulaNof: return "formula_nof";
  }
  return "?";
}

namespace {

// Seed of the INW generator this library builds for FORMULA[s] over k-party cost-R leaves.
std::optional<long> implemented_inw(const SeedLengthParams& p, double R, std::string& note) {
  int k = p.k;
  if (k < 2 || (k & (k - 1)) != 0 || p.n % k != 0) {
    note = "INW needs k a power of two dividing n";
    return std::nullopt;
  }
  double sqs = std::sqrt(static_cast<double>(p.s));
  double log_eps = std::log2(1.0 / p.eps.get_d());
  int t = std::max(1, static_cast<int>(std::ceil(p.c * sqs * log_eps)));
  long dprime = static_cast<long>(std::ceil(t * R));
  double e = schedule_exponent(p.s, p.eps, p.c);
  if (dprime > 4096 || e > 4096) {
    note = "parameters too large to instantiate";
    return std::nullopt;
  }
  Rational delta = frac(1, BigInt(1) << static_cast<int>(std::ceil(e)));
  InwConfig cfg = inw_config(p.n, k, static_cast<int>(dprime), delta, ExtractorBackend::ToeplitzHash);
  note = "toeplitz_hash INW, D' = " + std::to_string(dprime) + ", delta = 2^-" + std::to_string(static_cast<int>(std::ceil(e)));
  return cfg.seed_len;
}

}  // namespace

SeedLengthReport seed_length_report(SeedModel model, const SeedLengthParams& p) {
  if (p.n < 1 || p.s < 1 || p.eps <= 0 || p.eps >= 1 || p.c <= 0)
    throw ValidationError("seed length report needs n, s >= 1, 0 < eps < 1, c > 0");
  SeedLengthReport r;
  r.model = model;
  const double n = p.n, s = p.s, c = p.c;
  const double log_n = std::log2(n), log_s = std::log2(s), log_eps = std::log2(1.0 / p.eps.get_d());
  switch (model) {
    case SeedModel::FormulaXor: {
      r.theoretical = c * (std::sqrt(s) * log_s * log_eps + log_n);
      r.expression = "c (sqrt(s) log s log(1/eps) + log n)";
      double bits = log_n + schedule_exponent(p.s, p.eps, c);
      long l = std::max(1L, static_cast<long>(std::ceil(bits - 1e-12)));
      r.implemented = 2 * l;
      r.note = l <= 64 ? "small-bias over GF(2^" + std::to_string(l) + ")"
                       : "small-bias needs GF(2^" + std::to_string(l) + "); instantiable only up to 2^64";
      break;
    }
    case SeedModel::FormulaNih: {
      double lk = std::log2(static_cast<double>(p.k));
      r.theoretical = n / p.k + c * (std::sqrt(s) * (p.R + log_s) * log_eps + lk) * lk;
      r.expression = "n/k + c (sqrt(s) (R + log s) log(1/eps) + log k) log k";
      r.implemented = implemented_inw(p, p.R, r.note);
      break;
    }
    case SeedModel::FormulaLtf: {
      double m = p.halfspaces > 0 ? p.halfspaces : s;
      r.theoretical = c * std::sqrt(n) * std::pow(m, 0.25) * log_n * std::log2(n / p.eps.get_d());
      r.expression = "c n^(1/2) m^(1/4) log n log(n/eps)";
      SeedLengthParams q = p;
      q.k = 2;
      double R = p.R > 0 ? p.R : std::ceil(log_n) * std::ceil(std::log2(6.0 * s * n / p.eps.get_d()));
      r.implemented = implemented_inw(q, R, r.note);
      break;
    }
    case SeedModel::FormulaSym: {
      r.theoretical = c * std::sqrt(n) * std::pow(s, 0.25) * log_n * log_eps;
      r.expression = "c n^(1/2) s^(1/4) log n log(1/eps)";
      SeedLengthParams q = p;
      q.k = 2;
      double R = p.R > 0 ? p.R : 2.0 * ceil_log2(static_cast<u64>(p.n / 2 + 1));
      r.implemented = implemented_inw(q, R, r.note);
      break;
    }
    case SeedModel::FormulaNof: {
      double k = p.k;
      double denom = c * std::sqrt(s) * k * std::pow(4.0, k) * (p.R + log_n) * std::log2(n / p.eps.get_d());
      r.theoretical = n - n / denom;
      r.expression = "n - n / (c sqrt(s) k 4^k (R + log n) log(n/eps))";
      r.note = "GIP stretch seed is m t for output m t + t; no instance is fixed by (n, s, k, R, eps)";
      break;
    }
  }
  return r;
}

}  // namespace leafcomm
