#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>

#include "nclift/errors.hpp"

namespace nclift {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

namespace detail {

inline u64 mul_mod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

inline u64 pow_mod(u64 base, u64 e, u64 p) {
  u64 r = 1 % p;
  base %= p;
  while (e != 0) {
    if (e & 1) r = mul_mod(r, base, p);
    base = mul_mod(base, base, p);
    e >>= 1;
  }
  return r;
}

// Deterministic for every 64-bit input with this base set.
inline bool miller_rabin(u64 n) {
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : std::array<u64, 12>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (a % n == 0) continue;
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

/// Primality test: trial division up to sqrt(p) below 2^31, Miller-Rabin above.
inline bool is_prime(u64 p) {
  if (p < 2) return false;
  if (p < (u64{1} << 31)) {
    for (u64 d = 2; d * d <= p; ++d) {
      if (p % d == 0) return false;
    }
    return true;
  }
  return detail::miller_rabin(p);
}

/// A validated prime modulus. Values above 2^62 are rejected so that a sum of
/// two residues never overflows.
class Modulus {
 public:
  static constexpr u64 kDefault = 1000000007ULL;

  Modulus() : p_(kDefault) {}

  explicit Modulus(u64 p) : p_(p) {
    if (p >= (u64{1} << 62)) throw InvalidArgument("modulus " + std::to_string(p) + " exceeds 2^62");
    if (!is_prime(p)) throw InvalidArgument("modulus " + std::to_string(p) + " is not prime");
  }

  u64 value() const { return p_; }

  friend bool operator==(Modulus a, Modulus b) { return a.p_ == b.p_; }

 private:
  u64 p_;
};

/// Element of Z_p.
class Scalar {
 public:
  Scalar() = default;
  Scalar(u64 value, Modulus p) : v_(value % p.value()), p_(p) {}

  static Scalar from_signed(long long value, Modulus p) {
    const auto m = static_cast<long long>(p.value());
    long long r = value % m;
    if (r < 0) r += m;
    return Scalar(static_cast<u64>(r), p);
  }

  u64 value() const { return v_; }
  Modulus modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Scalar operator+(Scalar o) const {
    check(o);
    u64 s = v_ + o.v_;
    if (s >= p_.value()) s -= p_.value();
    return raw(s, p_);
  }
  Scalar operator-(Scalar o) const {
    check(o);
    return raw(v_ >= o.v_ ? v_ - o.v_ : v_ + p_.value() - o.v_, p_);
  }
  Scalar operator-() const { return raw(v_ == 0 ? 0 : p_.value() - v_, p_); }
  Scalar operator*(Scalar o) const {
    check(o);
    return raw(detail::mul_mod(v_, o.v_, p_.value()), p_);
  }
  Scalar& operator+=(Scalar o) { return *this = *this + o; }
  Scalar& operator-=(Scalar o) { return *this = *this - o; }
  Scalar& operator*=(Scalar o) { return *this = *this * o; }

  Scalar pow(u64 e) const { return raw(detail::pow_mod(v_, e, p_.value()), p_); }

  Scalar inverse() const {
    if (v_ == 0) throw InvalidArgument("inverse of zero");
    return pow(p_.value() - 2);
  }

  friend bool operator==(Scalar a, Scalar b) { return a.v_ == b.v_ && a.p_ == b.p_; }

  friend std::ostream& operator<<(std::ostream& os, Scalar s) { return os << s.v_; }

 private:
  static Scalar raw(u64 v, Modulus p) {
    Scalar s;
    s.v_ = v;
    s.p_ = p;
    return s;
  }

  void check(Scalar o) const {
    if (!(p_ == o.p_)) throw MismatchError("scalar moduli differ");
  }

  u64 v_ = 0;
  Modulus p_;
};

}  // namespace nclift
