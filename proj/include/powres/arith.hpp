#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "powres/errors.hpp"

namespace powres {

using BigInt = mpz_class;

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'cafe'f00dULL;

struct PrimePower {
  BigInt prime;
  unsigned long exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// sign * prod(prime^exponent), primes strictly increasing.
struct FactoredInteger {
  int sign = 1;
  std::vector<PrimePower> factors;

  BigInt value() const;
  std::string to_string() const;

  friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;
};

/// Miller-Rabin. Deterministic below 3.3e24 (first thirteen prime bases);
/// above that bound 64 extra bases are drawn from a generator seeded by
/// `seed`.
bool is_probable_prime(const BigInt& n, std::uint64_t seed = kDefaultSeed);

/// Trial division up to kTrialDivisionBound, then Brent's variant of
/// Pollard rho on the remaining cofactor. Throws std::invalid_argument for 0.
FactoredInteger factorize(const BigInt& n, std::uint64_t seed = kDefaultSeed);

inline constexpr std::uint64_t kTrialDivisionBound = 1'000'000;

/// Primes up to kTrialDivisionBound, computed once.
const std::vector<std::uint32_t>& small_primes();

/// Exact integer q-th root of n >= 1, if one exists.
std::optional<BigInt> integer_qth_root(const BigInt& n, unsigned long q);

/// True iff b = r^q for some integer r. For odd q the sign of b is free.
bool is_perfect_qth_power(const BigInt& b, unsigned long q);

BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& modulus);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Inverse of a modulo m (gcd(a, m) must be 1).
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m);

/// Nonnegative residue of b modulo m.
std::uint64_t mod_u64(const BigInt& b, std::uint64_t m);

/// Parses a decimal integer (optional leading sign). Throws
/// std::invalid_argument on anything else.
BigInt parse_integer(const std::string& text);

}  // namespace powres
