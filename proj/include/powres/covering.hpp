#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "powres/fq.hpp"

namespace powres {

/// The hyperplane {x in F_q^k : normal . x = 0} through the origin.
struct Hyperplane {
  fq::VectorF normal;
  std::int64_t modulus = 0;

  /// Validates that the normal is reduced mod q and not identically zero.
  static Hyperplane make(fq::VectorF normal, std::int64_t q);

  fq::Index ambient_dim() const { return normal.size(); }
  bool contains(const fq::VectorF& x) const;
};

/// Largest q^k the enumerating routines accept.
inline constexpr std::uint64_t kMaxEnumeratedPoints = 100'000'000;

/// Outcome of enumerating F_q^k against a family of hyperplanes.
///
/// Exactly one of `witness` / `assignment` is populated. The assignment is
/// indexed by the lexicographic rank of a point (first coordinate most
/// significant) and names the first hyperplane, by position in the input
/// family, that contains it.
struct CoveringResult {
  bool covered = false;
  std::optional<fq::VectorF> witness;
  std::vector<std::uint16_t> assignment;
};

/// q^k, or GuardError if it exceeds `limit`.
std::uint64_t point_count(fq::Index k, std::int64_t q, std::uint64_t limit = kMaxEnumeratedPoints);

fq::VectorF point_from_rank(std::uint64_t rank, fq::Index k, std::int64_t q);
std::uint64_t rank_of_point(const fq::VectorF& x, std::int64_t q);

/// Decides whether the union of `planes` is all of F_q^k. An empty family
/// covers nothing, not even the origin.
CoveringResult covers(std::span<const Hyperplane> planes, fq::Index k, std::int64_t q,
                      std::uint64_t limit = kMaxEnumeratedPoints);

/// Number of points of F_q^k lying on none of the hyperplanes.
std::uint64_t count_uncovered(std::span<const Hyperplane> planes, fq::Index k, std::int64_t q,
                              std::uint64_t limit = kMaxEnumeratedPoints);

/// Re-checks a result point by point.
bool verify_covering(const CoveringResult& result, std::span<const Hyperplane> planes, fq::Index k,
                     std::int64_t q);

/// Minimum-size sub-family (indices into `planes`, ascending) whose union is
/// F_q^k, found by exact branch and bound; nullopt if `planes` covers nothing.
std::optional<std::vector<std::size_t>> minimal_cover(std::span<const Hyperplane> planes, fq::Index k,
                                                      std::int64_t q);

/// The pencil x_1 = 0, x_2 = 0, x_1 + t x_2 = 0 (t = 1..q-1), zero padded to
/// dimension k. Always a covering of size q + 1.
std::vector<Hyperplane> synthesize_covering(fq::Index k, std::int64_t q);

/// Scales the normal so its first nonzero coordinate is 1.
Hyperplane normalize_hyperplane(const Hyperplane& h);

}  // namespace powres
