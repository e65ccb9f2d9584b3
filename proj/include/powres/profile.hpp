#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "powres/arith.hpp"
#include "powres/covering.hpp"
#include "powres/fq.hpp"

namespace powres {

/// An odd prime q together with the set B of nonzero integers under study.
struct QInput {
  std::int64_t q = 3;
  std::vector<BigInt> elements;

  /// Throws std::invalid_argument unless q is an odd prime below 2^16 and B
  /// is a nonempty list of nonzero integers.
  void validate() const;
};

/// Canonical exponent data of (B, q).
///
/// Column j describes the q-free value qfree_values[j] = prod_i p_i^nu_ij
/// with p_i = support_primes[i] and nu = exponents; source_index[j] is the
/// position in the original input of the element the column came from.
/// Columns are pairwise distinct and never zero.
struct ResidueProfile {
  std::int64_t q = 3;
  std::vector<BigInt> support_primes;
  fq::MatrixF exponents;
  std::vector<std::size_t> source_index;
  std::vector<BigInt> source_values;
  std::vector<BigInt> qfree_values;

  fq::Field field() const { return fq::Field(q); }
  fq::Index dimension() const { return static_cast<fq::Index>(support_primes.size()); }
  fq::Index columns() const { return exponents.cols(); }
};

/// Element `index` of the input equals root^q.
struct TrivialCertificate {
  std::size_t index = 0;
  BigInt element;
  BigInt root;
};

using ProfileOrTrivial = std::variant<ResidueProfile, TrivialCertificate>;

/// q-free part of |b|: every exponent of its factorization reduced mod q.
BigInt rad_q(const BigInt& b, std::int64_t q);

ProfileOrTrivial build_profile(const QInput& input);

/// Builds a profile straight from an exponent matrix, realizing column j as
/// prod_i primes[i]^nu_ij. Columns are kept as given (no deduplication);
/// zero columns are rejected.
ResidueProfile profile_from_exponents(std::int64_t q, const fq::MatrixF& exponents,
                                      const std::vector<BigInt>& primes);

/// One hyperplane sum_i nu_ij x_i = 0 per column, in column order.
std::vector<Hyperplane> hyperplanes_of(const ResidueProfile& profile);

/// Checks every ResidueProfile invariant; throws InvariantViolation.
void check_profile(const ResidueProfile& profile);

}  // namespace powres
