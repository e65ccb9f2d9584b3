#include "powres/profile.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace powres {

namespace {

struct ReducedFactors {
  BigInt qfree;
  std::map<BigInt, std::int64_t> exponents;  // only nonzero residues
};

ReducedFactors reduce_exponents(const BigInt& b, std::int64_t q) {
  ReducedFactors out{1, {}};
  for (const auto& [p, e] : factorize(abs(b)).factors) {
    const auto r = static_cast<std::int64_t>(e % static_cast<unsigned long>(q));
    if (r == 0) {
      continue;
    }
    BigInt pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(r));
    out.qfree *= pe;
    out.exponents.emplace(p, r);
  }
  return out;
}

}  // namespace

void QInput::validate() const {
  if (q < 3 || q >= fq::kMaxModulus || !is_probable_prime(BigInt(static_cast<long>(q)))) {
    if (q == 2) {
      throw std::invalid_argument("q must be an odd prime; q = 2 is out of scope");
    }
    throw std::invalid_argument("q must be an odd prime below 65536, got " + std::to_string(q));
  }
  if (elements.empty()) {
    throw std::invalid_argument("the set B must be nonempty");
  }
  for (std::size_t j = 0; j < elements.size(); ++j) {
    if (elements[j] == 0) {
      throw std::invalid_argument("element " + std::to_string(j) + " of B is zero");
    }
  }
}

BigInt rad_q(const BigInt& b, std::int64_t q) {
  if (b == 0) {
    throw std::invalid_argument("rad_q: b must be nonzero");
  }
  return reduce_exponents(b, q).qfree;
}

ProfileOrTrivial build_profile(const QInput& input) {
  input.validate();
  const auto q = input.q;
  for (std::size_t j = 0; j < input.elements.size(); ++j) {
    const BigInt& b = input.elements[j];
    if (auto root = integer_qth_root(abs(b), static_cast<unsigned long>(q))) {
      return TrivialCertificate{j, b, b < 0 ? BigInt(-*root) : *root};
    }
  }

  std::vector<ReducedFactors> columns;
  ResidueProfile profile;
  profile.q = q;
  std::set<BigInt> seen;
  std::set<BigInt> primes;
  for (std::size_t j = 0; j < input.elements.size(); ++j) {
    auto reduced = reduce_exponents(input.elements[j], q);
    if (!seen.insert(reduced.qfree).second) {
      continue;
    }
    for (const auto& entry : reduced.exponents) {
      primes.insert(entry.first);
    }
    profile.source_index.push_back(j);
    profile.source_values.push_back(input.elements[j]);
    profile.qfree_values.push_back(reduced.qfree);
    columns.push_back(std::move(reduced));
  }
  profile.support_primes.assign(primes.begin(), primes.end());

  const auto k = static_cast<fq::Index>(profile.support_primes.size());
  const auto l = static_cast<fq::Index>(columns.size());
  profile.exponents = fq::MatrixF::Zero(k, l);
  for (fq::Index i = 0; i < k; ++i) {
    const BigInt& p = profile.support_primes[static_cast<std::size_t>(i)];
    for (fq::Index j = 0; j < l; ++j) {
      const auto& exps = columns[static_cast<std::size_t>(j)].exponents;
      if (auto it = exps.find(p); it != exps.end()) {
        profile.exponents(i, j) = it->second;
      }
    }
  }
  check_profile(profile);
  return profile;
}

ResidueProfile profile_from_exponents(std::int64_t q, const fq::MatrixF& exponents,
                                      const std::vector<BigInt>& primes) {
  const fq::Field field(q);
  if (static_cast<fq::Index>(primes.size()) != exponents.rows()) {
    throw std::invalid_argument("profile_from_exponents: need one prime per row");
  }
  if (!fq::is_reduced(exponents, field)) {
    throw std::invalid_argument("profile_from_exponents: exponents must lie in [0, q)");
  }
  ResidueProfile profile;
  profile.q = q;
  profile.support_primes = primes;
  profile.exponents = exponents;
  for (fq::Index j = 0; j < exponents.cols(); ++j) {
    if (exponents.col(j).isZero()) {
      throw std::invalid_argument("profile_from_exponents: column " + std::to_string(j) + " is zero");
    }
    BigInt value = 1;
    for (fq::Index i = 0; i < exponents.rows(); ++i) {
      BigInt pe;
      mpz_pow_ui(pe.get_mpz_t(), primes[static_cast<std::size_t>(i)].get_mpz_t(),
                 static_cast<unsigned long>(exponents(i, j)));
      value *= pe;
    }
    profile.source_index.push_back(static_cast<std::size_t>(j));
    profile.source_values.push_back(value);
    profile.qfree_values.push_back(value);
  }
  return profile;
}

std::vector<Hyperplane> hyperplanes_of(const ResidueProfile& profile) {
  std::vector<Hyperplane> out;
  out.reserve(static_cast<std::size_t>(profile.columns()));
  for (fq::Index j = 0; j < profile.columns(); ++j) {
    out.push_back(Hyperplane::make(profile.exponents.col(j), profile.q));
  }
  return out;
}

void check_profile(const ResidueProfile& profile) {
  const auto field = profile.field();
  const auto k = profile.dimension();
  const auto l = profile.columns();
  auto fail = [](const std::string& what) { throw InvariantViolation("residue profile: " + what); };
  if (profile.exponents.rows() != k || profile.qfree_values.size() != static_cast<std::size_t>(l) ||
      profile.source_index.size() != static_cast<std::size_t>(l) ||
      profile.source_values.size() != static_cast<std::size_t>(l)) {
    fail("shape mismatch");
  }
  if (!fq::is_reduced(profile.exponents, field)) {
    fail("exponent outside [0, q)");
  }
  if (!std::is_sorted(profile.support_primes.begin(), profile.support_primes.end()) ||
      std::adjacent_find(profile.support_primes.begin(), profile.support_primes.end()) !=
          profile.support_primes.end()) {
    fail("support primes not strictly increasing");
  }
  for (fq::Index j = 0; j < l; ++j) {
    if (profile.exponents.col(j).isZero()) {
      fail("zero column " + std::to_string(j));
    }
    BigInt value = 1;
    for (fq::Index i = 0; i < k; ++i) {
      BigInt pe;
      mpz_pow_ui(pe.get_mpz_t(), profile.support_primes[static_cast<std::size_t>(i)].get_mpz_t(),
                 static_cast<unsigned long>(profile.exponents(i, j)));
      value *= pe;
    }
    if (value != profile.qfree_values[static_cast<std::size_t>(j)]) {
      fail("column " + std::to_string(j) + " does not reproduce its q-free value");
    }
  }
  for (fq::Index i = 0; i < k; ++i) {
    if (profile.exponents.row(i).isZero()) {
      fail("support prime " + profile.support_primes[static_cast<std::size_t>(i)].get_str() +
           " divides no q-free value");
    }
  }
}

}  // namespace powres
