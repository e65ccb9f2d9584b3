#include "powres/criterion.hpp"

#include <string>

namespace powres {

namespace {

void require_nonzero_twist(const ResidueProfile& profile, const fq::VectorF& c, const char* who) {
  if (c.size() != profile.columns()) {
    throw std::invalid_argument(std::string(who) + ": twist length " + std::to_string(c.size()) +
                                " does not match column count " + std::to_string(profile.columns()));
  }
  const auto field = profile.field();
  for (fq::Index j = 0; j < c.size(); ++j) {
    if (!field.contains(c(j)) || c(j) == 0) {
      throw std::invalid_argument(std::string(who) + ": twist entries must lie in [1, q-1]");
    }
  }
}

void require_point(const ResidueProfile& profile, const fq::VectorF& d, const char* who) {
  if (d.size() != profile.dimension() || !fq::is_reduced(d, profile.field())) {
    throw std::invalid_argument(std::string(who) + ": d must be a vector of F_q^k");
  }
}

// Advances c through {1..q-1}^l lexicographically; false after the last.
bool next_twist(fq::VectorF& c, std::int64_t q) {
  for (fq::Index j = c.size() - 1; j >= 0; --j) {
    if (c(j) < q - 1) {
      ++c(j);
      return true;
    }
    c(j) = 1;
  }
  return false;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::TriviallyYes:
      return "TriviallyYes";
    case Verdict::Yes:
      return "Yes";
    case Verdict::No:
      return "No";
  }
  return "?";
}

Decision decide(const QInput& input, std::uint64_t limit) {
  Decision decision;
  auto built = build_profile(input);
  if (auto* trivial = std::get_if<TrivialCertificate>(&built)) {
    decision.verdict = Verdict::TriviallyYes;
    decision.trivial = *trivial;
    return decision;
  }
  auto& profile = std::get<ResidueProfile>(built);
  const auto planes = hyperplanes_of(profile);
  auto result = covers(planes, profile.dimension(), profile.q, limit);
  if (!verify_covering(result, planes, profile.dimension(), profile.q)) {
    throw InvariantViolation("decide: covering result failed verification");
  }
  if (result.covered) {
    decision.verdict = Verdict::Yes;
  } else {
    decision.verdict = Verdict::No;
    decision.uncovered = result.witness;
  }
  decision.covering = std::move(result);
  decision.profile = std::move(profile);
  return decision;
}

fq::MatrixF twisted_matrix(const ResidueProfile& profile, const fq::VectorF& c) {
  require_nonzero_twist(profile, c, "twisted_matrix");
  return fq::reduced(profile.exponents * c.asDiagonal(), profile.field());
}

bool skalba_condition_holds(const ResidueProfile& profile, const fq::VectorF& c) {
  const auto m = twisted_matrix(profile, c);
  return !fq::row_space_contains(m, fq::VectorF(fq::VectorF::Ones(m.cols())), profile.field()).has_value();
}

std::optional<fq::VectorF> skalba_first_failure(const ResidueProfile& profile) {
  const auto l = profile.columns();
  std::uint64_t twists = 1;
  for (fq::Index j = 0; j < l; ++j) {
    twists *= static_cast<std::uint64_t>(profile.q - 1);
    if (twists > kMaxOracleTwists) {
      throw GuardError("skalba oracle: (q-1)^l = " + std::to_string(profile.q - 1) + "^" + std::to_string(l) +
                       " twists exceeds the limit of " + std::to_string(kMaxOracleTwists));
    }
  }
  fq::VectorF c = fq::VectorF::Ones(l);
  do {
    if (!skalba_condition_holds(profile, c)) {
      return c;
    }
  } while (next_twist(c, profile.q));
  return std::nullopt;
}

bool skalba_oracle(const ResidueProfile& profile) { return !skalba_first_failure(profile).has_value(); }

std::optional<SkalbaCertificate> skalba_solve(const ResidueProfile& profile, const fq::VectorF& c) {
  const auto field = profile.field();
  const auto m = twisted_matrix(profile, c);
  // If every basis vector has coordinate sum zero then so does every null
  // vector, and the condition fails for this c.
  std::optional<fq::VectorF> f;
  for (const auto& v : fq::null_space_basis(m, field)) {
    if (field.reduce(v.sum()) != 0) {
      f = v;
      break;
    }
  }
  if (!f) {
    if (skalba_condition_holds(profile, c)) {
      throw InvariantViolation("skalba_solve: condition holds but no null vector has nonzero sum");
    }
    return std::nullopt;
  }

  SkalbaCertificate cert;
  cert.c = c;
  cert.f = *f;
  cert.product = 1;
  for (fq::Index j = 0; j < m.cols(); ++j) {
    const auto e = field.mul(c(j), (*f)(j));
    cert.exponents.push_back(e);
    BigInt power;
    mpz_pow_ui(power.get_mpz_t(), profile.qfree_values[static_cast<std::size_t>(j)].get_mpz_t(),
               static_cast<unsigned long>(e));
    cert.product *= power;
  }
  auto root = integer_qth_root(cert.product, static_cast<unsigned long>(profile.q));
  if (!root) {
    throw InvariantViolation("skalba_solve: product " + cert.product.get_str() + " is not a perfect " +
                             std::to_string(profile.q) + "-th power although M(c) f = 0");
  }
  cert.root = *root;
  return cert;
}

bool verify_certificate(const ResidueProfile& profile, const SkalbaCertificate& cert) {
  const auto l = static_cast<std::size_t>(profile.columns());
  const auto q = profile.q;
  if (static_cast<std::size_t>(cert.c.size()) != l || static_cast<std::size_t>(cert.f.size()) != l ||
      cert.exponents.size() != l) {
    return false;
  }
  std::int64_t sum = 0;
  BigInt product = 1;
  for (std::size_t j = 0; j < l; ++j) {
    const auto cj = cert.c(static_cast<fq::Index>(j));
    const auto fj = cert.f(static_cast<fq::Index>(j));
    if (cj <= 0 || cj >= q || fj < 0 || fj >= q || cert.exponents[j] != (cj * fj) % q) {
      return false;
    }
    sum += fj;
    for (std::int64_t e = 0; e < cert.exponents[j]; ++e) {
      product *= profile.qfree_values[j];
    }
  }
  if (sum % q == 0 || product != cert.product) {
    return false;
  }
  BigInt power = 1;
  for (std::int64_t i = 0; i < q; ++i) {
    power *= cert.root;
  }
  return power == product;
}

fq::VectorF counterexample_c(const ResidueProfile& profile, const fq::VectorF& d) {
  require_point(profile, d, "counterexample_c");
  const auto field = profile.field();
  const fq::VectorF sums = fq::left_multiply(d, profile.exponents, field);
  fq::VectorF c(sums.size());
  for (fq::Index j = 0; j < sums.size(); ++j) {
    if (sums(j) == 0) {
      throw std::invalid_argument("counterexample_c: d lies on the hyperplane of column " + std::to_string(j));
    }
    c(j) = field.inv(sums(j));
  }
  const auto row = fq::left_multiply(d, twisted_matrix(profile, c), field);
  if (!(row.array() == 1).all()) {
    throw InvariantViolation("counterexample_c: d^T M(c) is not the all-ones row");
  }
  return c;
}

fq::Index zero_entry_witness(const ResidueProfile& profile, const fq::VectorF& c, const fq::VectorF& d) {
  require_point(profile, d, "zero_entry_witness");
  const auto field = profile.field();
  const auto row = fq::left_multiply(d, twisted_matrix(profile, c), field);
  const fq::VectorF sums = fq::left_multiply(d, profile.exponents, field);
  for (fq::Index j = 0; j < sums.size(); ++j) {
    if (sums(j) == 0) {
      if (row(j) != 0) {
        throw InvariantViolation("zero_entry_witness: annihilating column has nonzero twisted entry");
      }
      return j;
    }
  }
  throw InvariantViolation("zero_entry_witness: no hyperplane contains d, so the family does not cover");
}

QInput exponent_twist(const QInput& input, const fq::VectorF& a) {
  input.validate();
  if (static_cast<std::size_t>(a.size()) != input.elements.size()) {
    throw std::invalid_argument("exponent_twist: need one exponent per element");
  }
  QInput out{input.q, {}};
  for (std::size_t j = 0; j < input.elements.size(); ++j) {
    const auto e = a(static_cast<fq::Index>(j));
    if (e < 1 || e >= input.q) {
      throw std::invalid_argument("exponent_twist: exponents must lie in [1, q-1]");
    }
    BigInt power;
    mpz_pow_ui(power.get_mpz_t(), input.elements[j].get_mpz_t(), static_cast<unsigned long>(e));
    out.elements.push_back(power);
  }
  return out;
}

}  // namespace powres
