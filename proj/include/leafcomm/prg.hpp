/*! \file prg.hpp
  \brief Generators for formulas over leaf gates: small-bias (XOR leaves),
  extractor-based INW recursion (number-in-hand leaves), and the GIP stretch.

  Bit strings are vectors of 0/1 bytes; bit 0 is x1. The 64-bit helpers pack
  bit i of a string into bit i of a word.
*/
#pragma once

#include "leafcomm/common.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace leafcomm {

using Bits = std::vector<std::uint8_t>;

Bits bits_from_u64(u64 v, int len);
u64 bits_to_u64(const Bits& b);

// ---------------------------------------------------------------- GF(2^l)

/// Low terms of the fixed irreducible x^l + ... for 1 <= l <= 64 (fewest terms, then smallest exponents).
u64 irreducible_low_terms(int l);

class Gf2Field {
 public:
  explicit Gf2Field(int l);
  int degree() const { return l_; }
  u64 mul(u64 a, u64 b) const;
  u64 mask() const { return low_mask(l_); }

 private:
  int l_;
  u64 low_;
};

// ---------------------------------------------------------------- small-bias

/// Smallest l with 2^l >= n / delta.
int small_bias_ell(int n, const Rational& delta);

/// Seed = a (bits 0..l-1) then b (bits l..2l-1); output bit j = <a^(j+1), b>.
Bits small_bias_expand(const Bits& seed, int n, const Rational& delta);
u64 small_bias_expand64(u64 seed, int n, int ell);

/// Exact max over nonempty masks of |E[(-1)^<mask, G(seed)>]|, all 2^(2l) seeds (n <= 20, l <= 16).
Rational small_bias_max_bias(int n, int ell);

/// Exponent c sqrt(s) log2(s) log2(1/eps) of the delta schedule; log2(s) is floored at 1.
double schedule_exponent(int s, const Rational& eps, double c);
/// l for the formula-over-XOR generator: ceil(log2(n) + schedule_exponent).
int schedule_ell(int n, int s, const Rational& eps, double c);

// ---------------------------------------------------------------- extractors and INW

enum class ExtractorBackend { ToeplitzHash, FieldHash };
std::string extractor_backend_name(ExtractorBackend b);
ExtractorBackend parse_extractor_backend(const std::string& name);

/*! \brief Full-length extractor on r-bit sources.

  Split x = x1 (r-m bits) | x2 (m bits). The hash is h = H_z(x1) xor x2 with
  H_z a Toeplitz matrix (seed r-1 bits) or multiplication by z in GF(2^(r-m))
  (seed r-m bits). Output = h | first r-m seed bits. With m = 0 the output is
  the first r seed bits.
*/
struct ExtractorSpec {
  int r = 0;          // input and output length
  int hash_bits = 0;  // m
  ExtractorBackend backend = ExtractorBackend::ToeplitzHash;
  int seed_bits() const;
  /// Leftover-hash bound 2^{-1-(r-m)/2}, rounded up to a rational; 0 when m = 0.
  Rational error_bound() const;
  /// Largest m the backend accepts for this r.
  int max_hash_bits() const;
};

Bits extract(const ExtractorSpec& spec, const Bits& x, const Bits& z);

struct InwConfig {
  int n = 0, k = 2, t = 1;
  int dprime = 0;                   // D': communication cost being fooled
  ExtractorBackend backend = ExtractorBackend::ToeplitzHash;
  std::vector<ExtractorSpec> levels;  // Ext_0 .. Ext_{t-1}
  Rational delta_prime;             // max level error
  Rational delta;                   // 3^t 2^D' delta_prime
  int seed_len = 0;

  int block() const { return n / k; }
};

/// Chooses the largest hash length per level with error <= delta / (3^t 2^D').
InwConfig inw_config(int n, int k, int dprime, const Rational& delta, ExtractorBackend backend);
/// Explicit hash lengths; throws when a level cannot host its m.
InwConfig inw_config_with_hash_bits(int n, int k, int dprime, const std::vector<int>& hash_bits,
                                    ExtractorBackend backend);

/// Seed = a0 (n/k bits) | z_0 | ... | z_{t-1}; G_i(a, z) = G_{i-1}(a) | G_{i-1}(Ext_{i-1}(a, z)).
Bits inw_expand(const Bits& seed, const InwConfig& cfg);

// ---------------------------------------------------------------- GIP stretch

/*! Seed = x_1 .. x_t, m bits each, every x_j cut into k blocks of m/k bits.
    For block i = 1..k emit x_1^(i) .. x_t^(i), then GIP^k_m(x_j) for the
    t/k indices j = (i-1)t/k + 1 .. i t/k. Output length m t + t. */
Bits gip_stretch_expand(const Bits& seed, int m, int t, int k);

// ---------------------------------------------------------------- generators

enum class GeneratorKind { SmallBias, Inw, GipStretch };
std::string generator_kind_name(GeneratorKind k);

struct Generator {
  GeneratorKind kind = GeneratorKind::SmallBias;
  int seed_len = 0;
  int out_len = 0;
  int ell = 0;                 // small-bias
  Rational delta;              // small-bias bias bound n/2^l, or the INW delta
  std::optional<InwConfig> inw;
  int m = 0, t = 0, k = 0;     // GIP stretch

  Bits expand(const Bits& seed) const;
  /// Requires seed_len <= 64 and out_len <= 64.
  u64 expand64(u64 seed) const;
};

Generator small_bias_generator(int n, const Rational& delta);
Generator small_bias_generator_ell(int n, int ell);
Generator inw_generator(const InwConfig& cfg);
Generator gip_stretch_generator(int m, int t, int k);

// ---------------------------------------------------------------- fooling

struct FoolingGap {
  bool exact = false;
  Rational gap;              // exact |Pr[f(G)] - Pr[f(U)]| when exact
  Rational p_generator, p_uniform;
  double estimate = 0;       // gap as double (sampled or exact)
  double half_width = 0;     // 99% half-width when sampled
  u64 samples = 0;
};

/// Exhaustive when out_len <= 20 and seed_len <= 24, otherwise `samples` draws per side.
FoolingGap fooling_gap(const Generator& g, const std::function<bool(u64)>& f, u64 seed = 0,
                       u64 samples = 1000000);

// ---------------------------------------------------------------- seed lengths

enum class SeedModel { FormulaXor, FormulaLtf, FormulaSym, FormulaNih, FormulaNof };
SeedModel parse_seed_model(const std::string& name);
std::string seed_model_name(SeedModel m);

struct SeedLengthParams {
  int n = 0;
  int s = 1;
  int k = 2;          // parties (nih, nof)
  double R = 1;       // leaf protocol cost (nih, nof; ltf/sym derive a default when <= 0)
  int halfspaces = 0; // ltf: number of halfspaces, defaults to s
  Rational eps = Rational(1, 4);
  double c = 1;
};

struct SeedLengthReport {
  SeedModel model = SeedModel::FormulaXor;
  double theoretical = 0;            // closed form with constant c
  std::string expression;
  std::optional<long> implemented;   // seed length of the generator this library builds
  std::string note;
};

SeedLengthReport seed_length_report(SeedModel model, const SeedLengthParams& p);

}  // namespace leafcomm
