#pragma once

// Prime-by-prime checks of "B contains a q-th power modulo p".
//
// For p != 1 (mod q) the map x -> x^q permutes F_p^*, so every element is a
// q-th power and only split primes (p = 1 mod q) can fail. Residue symbols
// are reported as exponents j of a fixed generator zeta of the order-q
// subgroup: zeta = g^((p-1)/q) with g the least primitive root mod p.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "powres/arith.hpp"

namespace powres {

inline constexpr std::uint64_t kMaxScanBound = 10'000'000;

/// p = q, or p divides an element of B.
class ExcludedPrime : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

std::uint64_t least_primitive_root(std::uint64_t p);

/// g^((p-1)/q) for the least primitive root g; requires p = 1 (mod q).
std::uint64_t canonical_zeta(std::uint64_t p, std::int64_t q);

struct ResidueSymbol {
  std::int64_t value = 0;  // b^((p-1)/q) = zeta^value
  bool trivial = true;     // value == 0, i.e. b is a q-th power mod p
};

ResidueSymbol residue_symbol(const BigInt& b, std::uint64_t p, std::int64_t q);

struct ElementCheck {
  BigInt element;
  bool is_residue = false;
};

struct PrimeCheckReport {
  std::uint64_t p = 0;
  bool splits = false;
  std::vector<ElementCheck> per_element;
  bool outcome = false;
};

/// Throws ExcludedPrime for p = q or p | b_j, std::invalid_argument if p
/// is not prime.
PrimeCheckReport has_qth_power_mod_p(std::span<const BigInt> elements, std::uint64_t p, std::int64_t q);

/// First prime p <= bound, outside the excluded set, modulo which no element
/// of B is a q-th power.
std::optional<std::uint64_t> find_counterexample_prime(std::span<const BigInt> elements, std::int64_t q,
                                                       std::uint64_t bound);

struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

inline constexpr std::size_t kListedFailures = 50;

struct DensityReport {
  std::uint64_t bound = 0;
  std::uint64_t primes_checked = 0;  // primes <= bound outside the excluded set
  std::uint64_t excluded_primes = 0;
  std::uint64_t split_primes = 0;
  std::uint64_t failing_count = 0;
  std::vector<std::uint64_t> failing_primes;  // first kListedFailures only
  std::uint64_t uncovered_points = 0;         // U
  std::uint64_t dimension = 0;                // k
  Ratio empirical;
  /// U / (q^k (q-1)): share of primes whose residue-index vector in F_q^k
  /// avoids every hyperplane, assuming those vectors are equidistributed
  /// over split primes.
  Ratio predicted;
};

DensityReport census(std::span<const BigInt> elements, std::int64_t q, std::uint64_t bound);

/// Some r with r^q = b (mod p), or nullopt when b is not a q-th power.
/// Requires p prime, p != q, p not dividing b.
std::optional<std::uint64_t> qth_root_mod_p(const BigInt& b, std::uint64_t p, std::int64_t q);

}  // namespace powres
