#pragma once

#include <charconv>
#include <numeric>
#include <string>

#include "common.hpp"

namespace zdcoh {

enum class RingKind { integers, rationals, modular };

/// Runtime description of the coefficient ring: Z, Q, or Z/n.
struct RingDesc {
  RingKind kind = RingKind::integers;
  long long modulus = 0;  // >= 2 iff kind == modular

  friend bool operator==(const RingDesc&, const RingDesc&) = default;
};

inline RingDesc ring_Z() { return {RingKind::integers, 0}; }
inline RingDesc ring_Q() { return {RingKind::rationals, 0}; }
inline RingDesc ring_Zmod(long long n) {
  require(n >= 2, "modulus must be >= 2");
  return {RingKind::modular, n};
}

namespace detail {

inline long long parse_ll(const std::string& s) {
  long long v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw parse_error("bad integer literal: '" + s + "'");
  return v;
}

inline __int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline long long narrow128(__int128 x) {
  if (x > INT64_MAX || x < INT64_MIN) throw arithmetic_error("rational arithmetic overflow");
  return static_cast<long long>(x);
}

}  // namespace detail

/// Plain 64-bit integer with overflow-checked arithmetic.
struct Zint {
  long long v = 0;

  friend Zint operator+(Zint a, Zint b) { return {checked_add(a.v, b.v)}; }
  friend Zint operator-(Zint a, Zint b) { return {checked_sub(a.v, b.v)}; }
  friend Zint operator*(Zint a, Zint b) { return {checked_mul(a.v, b.v)}; }
  friend Zint operator-(Zint a) { return {checked_neg(a.v)}; }
  friend bool operator==(const Zint&, const Zint&) = default;
};

inline bool is_zero(const Zint& x) { return x.v == 0; }

/// Exact rational number, always stored reduced with positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) {
    if (d == 0) throw arithmetic_error("zero denominator");
    __int128 nn = n, dd = d;
    if (dd < 0) {
      nn = -nn;
      dd = -dd;
    }
    __int128 g = detail::gcd128(nn, dd);
    if (g > 1) {
      nn /= g;
      dd /= g;
    }
    num = detail::narrow128(nn);
    den = detail::narrow128(dd);
  }

  static Rational from128(__int128 n, __int128 d) {
    if (d == 0) throw arithmetic_error("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = detail::gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rational r;
    r.num = detail::narrow128(n);
    r.den = detail::narrow128(d);
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                   static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                   static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw arithmetic_error("division by zero");
    return from128(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
  }
  friend Rational operator-(const Rational& a) { return from128(-static_cast<__int128>(a.num), a.den); }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a == b || a < b; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }
};

inline bool is_zero(const Rational& x) { return x.num == 0; }

/// floor(a) as an integer.
inline long long rat_floor(const Rational& a) { return floor_div(a.num, a.den); }
/// ceil(a) as an integer.
inline long long rat_ceil(const Rational& a) { return -floor_div(-a.num, a.den); }

inline std::string rat_str(const Rational& a) {
  if (a.den == 1) return std::to_string(a.num);
  return std::to_string(a.num) + "/" + std::to_string(a.den);
}

inline Rational rat_parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(detail::parse_ll(s));
  long long n = detail::parse_ll(s.substr(0, slash));
  long long d = detail::parse_ll(s.substr(slash + 1));
  if (d == 0) throw parse_error("zero denominator in '" + s + "'");
  return Rational(n, d);
}

/// Residue mod n.  A value with n == 0 is an integer literal that has not yet
/// met its modulus; it is coerced on the first combination with a moded value.
struct Zmod {
  long long v = 0;
  long long n = 0;

  Zmod() = default;
  Zmod(long long value) : v(value), n(0) {}
  Zmod(long long value, long long modulus) : v(value), n(modulus) { reduce(); }

  void reduce() {
    if (n > 0) v = floor_mod(v, n);
  }

  static long long join(long long a, long long b) {
    if (a && b && a != b) throw arithmetic_error("mixed moduli");
    return a ? a : b;
  }

  friend Zmod operator+(const Zmod& a, const Zmod& b) { return Zmod(checked_add(a.v, b.v), join(a.n, b.n)); }
  friend Zmod operator-(const Zmod& a, const Zmod& b) { return Zmod(checked_sub(a.v, b.v), join(a.n, b.n)); }
  friend Zmod operator*(const Zmod& a, const Zmod& b) { return Zmod(checked_mul(a.v, b.v), join(a.n, b.n)); }
  friend Zmod operator-(const Zmod& a) { return Zmod(checked_neg(a.v), a.n); }
  friend bool operator==(const Zmod& a, const Zmod& b) {
    long long n = join(a.n, b.n);
    if (n == 0) return a.v == b.v;
    return floor_mod(a.v, n) == floor_mod(b.v, n);
  }

 private:
  Zmod(long long value, long long modulus, int) : v(value), n(modulus) {}
};

inline bool is_zero(const Zmod& x) { return x.n ? floor_mod(x.v, x.n) == 0 : x.v == 0; }

template <class R>
struct ring_traits;

template <>
struct ring_traits<Zint> {
  static constexpr RingKind kind = RingKind::integers;
  static Zint zero(const RingDesc&) { return {}; }
  static Zint one(const RingDesc&) { return {1}; }
  static Zint from_int(long long k, const RingDesc&) { return {k}; }
  static Zint conform(Zint x, const RingDesc&) { return x; }
  static Zint parse(const std::string& s, const RingDesc&) { return {detail::parse_ll(s)}; }
  static std::string str(const Zint& x) { return std::to_string(x.v); }
};

template <>
struct ring_traits<Rational> {
  static constexpr RingKind kind = RingKind::rationals;
  static Rational zero(const RingDesc&) { return {}; }
  static Rational one(const RingDesc&) { return {1}; }
  static Rational from_int(long long k, const RingDesc&) { return {k}; }
  static Rational conform(Rational x, const RingDesc&) { return x; }
  static Rational parse(const std::string& s, const RingDesc&) { return rat_parse(s); }
  static std::string str(const Rational& x) { return rat_str(x); }
};

template <>
struct ring_traits<Zmod> {
  static constexpr RingKind kind = RingKind::modular;
  static Zmod zero(const RingDesc& d) { return {0, d.modulus}; }
  static Zmod one(const RingDesc& d) { return {1, d.modulus}; }
  static Zmod from_int(long long k, const RingDesc& d) { return {k, d.modulus}; }
  static Zmod conform(Zmod x, const RingDesc& d) {
    if (x.n && x.n != d.modulus) throw arithmetic_error("mixed moduli");
    return {x.v, d.modulus};
  }
  static Zmod parse(const std::string& s, const RingDesc& d) { return {detail::parse_ll(s), d.modulus}; }
  static std::string str(const Zmod& x) {
    Zmod y = x;
    y.reduce();
    return std::to_string(y.v);
  }
};

/// Calls fn with a value of the ring element type selected by desc.kind.
template <class F>
decltype(auto) with_ring(const RingDesc& desc, F&& fn) {
  switch (desc.kind) {
    case RingKind::integers: return fn(Zint{});
    case RingKind::rationals: return fn(Rational{});
    case RingKind::modular: return fn(Zmod{0, desc.modulus});
  }
  throw parse_error("unknown ring");
}

}  // namespace zdcoh
