#pragma once

// Exact coefficient fields: the rationals (GMP) and prime fields F_p.
//
// Every algorithm in dgkit is a template over a field policy F exposing
//   using value_type;
//   zero(), one(), from_int(), add(), sub(), mul(), neg(), inv(),
//   is_zero(), to_string(), parse(), spec(), random().
// value_type{} is always the zero element, so containers can be
// default-initialised without a field at hand.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dgkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Deterministic RNG used by every randomized suite.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n); n > 0. Plain modulo keeps streams identical across
  // standard library implementations.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

 private:
  std::mt19937_64 engine_;
};

enum class FieldKind { rational, prime };

struct FieldSpec {
  FieldKind kind = FieldKind::rational;
  std::uint32_t p = 0;

  static FieldSpec rational() { return {}; }
  static FieldSpec prime(std::uint32_t p) { return {FieldKind::prime, p}; }

  std::string name() const { return kind == FieldKind::rational ? "Q" : "F_" + std::to_string(p); }

  // Accepts "Q", "QQ", "rational", "F_101", "F101", "GF(101)", "101".
  static FieldSpec parse(std::string_view s) {
    if (s == "Q" || s == "QQ" || s == "rational") return rational();
    std::string digits;
    for (char c : s)
      if (c >= '0' && c <= '9') digits.push_back(c);
    if (digits.empty()) throw Error("unrecognised field '" + std::string(s) + "'");
    return prime(static_cast<std::uint32_t>(std::stoul(digits)));
  }

  bool operator==(const FieldSpec&) const = default;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p) || p >= (1u << 31)) throw Error("modulus " + std::to_string(p) + " is not a supported prime");
  }

  std::uint32_t modulus() const { return p_; }
  FieldSpec spec() const { return FieldSpec::prime(p_); }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<value_type>(r);
  }
  value_type add(value_type a, value_type b) const {
    std::uint64_t s = std::uint64_t(a) + b;
    return static_cast<value_type>(s >= p_ ? s - p_ : s);
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : static_cast<value_type>(std::uint64_t(a) + p_ - b); }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const { return static_cast<value_type>((std::uint64_t(a) * b) % p_); }
  value_type inv(value_type a) const {
    if (a == 0) throw Error("division by zero in " + spec().name());
    // Fermat: a^(p-2)
    std::uint64_t result = 1, base = a, e = p_ - 2;
    while (e) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<value_type>(result);
  }
  bool is_zero(value_type a) const { return a == 0; }
  bool valid(value_type a) const { return a < p_; }

  std::string to_string(value_type a) const { return std::to_string(a); }
  value_type parse(std::string_view s) const {
    auto slash = s.find('/');
    if (slash != std::string_view::npos) return mul(parse(s.substr(0, slash)), inv(parse(s.substr(slash + 1))));
    try {
      return from_int(std::stoll(std::string(s)));
    } catch (const std::exception&) {
      throw Error("bad coefficient '" + std::string(s) + "'");
    }
  }
  value_type random(Rng& rng) const { return static_cast<value_type>(rng.below(p_)); }

 private:
  std::uint32_t p_;
};

class RationalField {
 public:
  using value_type = mpq_class;

  FieldSpec spec() const { return FieldSpec::rational(); }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const { return mpq_class(mpz_class(std::to_string(v))); }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw Error("division by zero in Q");
    return 1 / a;
  }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  // Reduced with positive denominator.
  bool valid(const value_type& a) const {
    value_type c = a;
    c.canonicalize();
    return c.get_num() == a.get_num() && c.get_den() == a.get_den() && sgn(a.get_den()) > 0;
  }

  std::string to_string(const value_type& a) const { return a.get_str(); }
  value_type parse(std::string_view s) const {
    try {
      value_type v(std::string(s), 10);
      if (sgn(v.get_den()) == 0) throw Error("zero denominator in '" + std::string(s) + "'");
      v.canonicalize();
      return v;
    } catch (const std::invalid_argument&) {
      throw Error("bad coefficient '" + std::string(s) + "'");
    }
  }
  // Small integers keep randomized runs over Q tractable.
  value_type random(Rng& rng) const { return from_int(static_cast<long long>(rng.below(7)) - 3); }
};

// (-1)^n
inline int parity_sign(long long n) { return (n % 2 == 0) ? 1 : -1; }

template <class F>
typename F::value_type signed_value(const F& k, int sign, const typename F::value_type& v) {
  return sign > 0 ? v : k.neg(v);
}

}  // namespace dgkit
