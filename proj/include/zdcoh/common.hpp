#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zdcoh {

/// Base class for all errors raised by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input: files, descriptors, out-of-range indices, size mismatches.
struct parse_error : error {
  using error::error;
};

/// A stated hypothesis fails (e.g. the support family is not proper).
struct hypothesis_error : error {
  using error::error;
};

/// An input that must be a cocycle is not one.
struct cocycle_error : error {
  using error::error;
};

/// A section operation would leave the representable class
/// (e.g. summing along a direction of infinite extent).
struct support_error : error {
  using error::error;
};

/// Exact integer arithmetic left the 64-bit range.
struct arithmetic_error : error {
  using error::error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw parse_error(what);
}

inline long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw arithmetic_error("integer overflow in +");
  return r;
}

inline long long checked_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) throw arithmetic_error("integer overflow in -");
  return r;
}

inline long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw arithmetic_error("integer overflow in *");
  return r;
}

inline long long checked_neg(long long a) { return checked_sub(0, a); }

/// Floor division (rounds toward minus infinity); den > 0.
inline long long floor_div(long long num, long long den) {
  long long q = num / den;
  if ((num % den) != 0 && ((num < 0) != (den < 0))) --q;
  return q;
}

/// Nonnegative remainder matching floor_div; den > 0.
inline long long floor_mod(long long num, long long den) {
  return num - checked_mul(floor_div(num, den), den);
}

}  // namespace zdcoh
