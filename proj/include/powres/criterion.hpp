#pragma once

// Deciding whether B contains a q-th power modulo almost every prime.
//
// The decision itself goes through the hyperplane covering test. The
// Skalba-style matrix condition (for every nonzero twist c, the all-ones
// row is outside the row space of M(c), M(c)_ij = nu_ij c_j) is provided as
// an independent brute-force oracle, together with the constructive witnesses
// linking the two: a zero entry of d^T M(c) when the hyperplanes cover, and
// the twist c_j = (nu_j . d)^-1 when a point d escapes them.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "powres/covering.hpp"
#include "powres/profile.hpp"

namespace powres {

enum class Verdict { TriviallyYes, Yes, No };

std::string_view to_string(Verdict v);

struct Decision {
  Verdict verdict = Verdict::No;
  std::optional<TrivialCertificate> trivial;
  std::optional<ResidueProfile> profile;
  /// Present unless trivial; holds the assignment (Yes) or witness (No).
  std::optional<CoveringResult> covering;
  std::optional<fq::VectorF> uncovered;
};

Decision decide(const QInput& input, std::uint64_t limit = kMaxEnumeratedPoints);

/// sum f_j != 0 (mod q) and prod qfree_j^(c_j f_j mod q) = root^q.
struct SkalbaCertificate {
  fq::VectorF c;
  fq::VectorF f;
  std::vector<std::int64_t> exponents;
  BigInt product;
  BigInt root;
};

/// M(c) with entries nu_ij c_j. Rejects c of the wrong length or with a
/// zero entry.
fq::MatrixF twisted_matrix(const ResidueProfile& profile, const fq::VectorF& c);

bool skalba_condition_holds(const ResidueProfile& profile, const fq::VectorF& c);

inline constexpr std::uint64_t kMaxOracleTwists = 10'000'000;

/// Lexicographically least c in (F_q \ {0})^l violating the condition, or
/// nullopt if the condition holds for all of them. GuardError when
/// (q-1)^l exceeds kMaxOracleTwists.
std::optional<fq::VectorF> skalba_first_failure(const ResidueProfile& profile);

bool skalba_oracle(const ResidueProfile& profile);

/// Integer certificate for one twist c; nullopt when the condition fails
/// for c.
std::optional<SkalbaCertificate> skalba_solve(const ResidueProfile& profile, const fq::VectorF& c);

/// Recomputes the product and root from scratch.
bool verify_certificate(const ResidueProfile& profile, const SkalbaCertificate& cert);

/// c_j = (sum_i nu_ij d_i)^-1 for an uncovered point d; afterwards
/// d^T M(c) is the all-ones row.
fq::VectorF counterexample_c(const ResidueProfile& profile, const fq::VectorF& d);

/// First column j with sum_i nu_ij d_i = 0, which is the hyperplane the
/// covering assignment gives d; entry j of d^T M(c) is then zero.
fq::Index zero_entry_witness(const ResidueProfile& profile, const fq::VectorF& c, const fq::VectorF& d);

/// B' = {b_j^a_j} for a in (F_q \ {0})^l, a_j taken in [1, q-1].
QInput exponent_twist(const QInput& input, const fq::VectorF& a);

}  // namespace powres
