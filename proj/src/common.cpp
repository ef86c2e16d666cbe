#include "leafcomm/common.hpp"

#include <cctype>

namespace leafcomm {

namespace {

bool is_integer_text(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

BigInt parse_int(std::string_view s) {
  std::string t(s);
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  return BigInt(t, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto dot = text.find('.'); dot != std::string_view::npos && text.find('/') == std::string_view::npos) {
    // exact decimal: digits before and after the point
    std::string whole(text.substr(0, dot)), part(text.substr(dot + 1));
    bool neg = !whole.empty() && whole[0] == '-';
    std::string digits = (neg ? whole.substr(1) : whole) + part;
    if (digits.empty() || part.empty() || !is_integer_text(digits) || digits[0] == '-' || digits[0] == '+')
      throw ValidationError("malformed rational '" + std::string(text) + "', expected A/B or a decimal");
    BigInt scale = 1;
    for (std::size_t i = 0; i < part.size(); ++i) scale *= 10;
    Rational q = frac(parse_int(digits), scale);
    return neg ? Rational(-q) : q;
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_text(num) || !is_integer_text(den))
    throw ValidationError("malformed rational '" + std::string(text) + "', expected A/B");
  BigInt d = parse_int(den);
  if (d == 0) throw ValidationError("malformed rational '" + std::string(text) + "': zero denominator");
  Rational q(parse_int(num), d);
  q.canonicalize();
  return q;
}

Rational frac(const BigInt& a, const BigInt& b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

BigInt round_nearest(const Rational& q, bool& tie) {
  Rational twice = q * 2;
  // floor(q + 1/2)
  BigInt fl;
  Rational shifted = q + Rational(1, 2);
  mpz_fdiv_q(fl.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  tie = (twice.get_den() == 1) && (twice.get_num() % 2 != 0);
  return fl;
}

BigInt ceil_q(const Rational& q) {
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c;
}

int ceil_log2(u64 x) {
  if (x <= 1) return 0;
  return 64 - std::countl_zero(x - 1);
}

u64 mix64(u64 x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

Rng::Rng(u64 seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)), counter_(0) {}

Rng Rng::split(u64 stream) const {
  return Rng(mix64(key_ ^ mix64(stream + 0x9e3779b97f4a7c15ULL)) + 0x3c6ef372fe94f82bULL, 0);
}

u64 Rng::next() {
  u64 c = counter_++;
  return mix64(mix64(key_ + c * 0x9e3779b97f4a7c15ULL) ^ key_);
}

u64 Rng::below(u64 bound) {
  // Lemire's nearly divisionless method with rejection.
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  u64 low = static_cast<u64>(m);
  if (low < bound) {
    u64 threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<u64>(m);
    }
  }
  return static_cast<u64>(m >> 64);
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

}  // namespace leafcomm
