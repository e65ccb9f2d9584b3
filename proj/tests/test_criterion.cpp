#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "powres/criterion.hpp"

using namespace powres;
using oracle::mat;
using oracle::vec;

namespace {

ResidueProfile profile_of(std::int64_t q, std::vector<BigInt> b) {
  return std::get<ResidueProfile>(build_profile({q, std::move(b)}));
}

const std::vector<BigInt> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

std::vector<BigInt> primes_avoiding(std::int64_t q, std::size_t count) {
  std::vector<BigInt> out;
  for (const auto& p : kPrimes) {
    if (p != q && out.size() < count) {
      out.push_back(p);
    }
  }
  return out;
}

fq::MatrixF random_nu(std::mt19937_64& rng, fq::Index k, fq::Index l, std::int64_t q) {
  std::uniform_int_distribution<std::uint64_t> pick(1, point_count(k, q) - 1);
  fq::MatrixF nu(k, l);
  for (fq::Index j = 0; j < l; ++j) {
    nu.col(j) = point_from_rank(pick(rng), k, q);
  }
  return nu;
}

std::vector<BigInt> random_set(std::mt19937_64& rng, std::int64_t q, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::uniform_int_distribution<int> exponent(0, static_cast<int>(q) + 1);
  const auto primes = primes_avoiding(q, 3);
  std::vector<BigInt> out;
  for (auto n = size(rng); n > 0; --n) {
    BigInt b = 1;
    for (const auto& p : primes) {
      for (int e = exponent(rng); e > 0; --e) {
        b *= p;
      }
    }
    out.push_back(b == 1 ? BigInt(primes[0]) : b);
  }
  return out;
}

}  // namespace

TEST_CASE("decide fixtures") {
  CHECK(decide({3, {2, 3, 6, 12}}).verdict == Verdict::Yes);
  const auto no = decide({3, {2, 3, 6}});
  CHECK(no.verdict == Verdict::No);
  CHECK(no.uncovered == vec({1, 1}));
  const auto trivial = decide({3, {5, -27}});
  CHECK(trivial.verdict == Verdict::TriviallyYes);
  CHECK(trivial.trivial->root == -3);
  CHECK(decide({5, {2, 21, 42, 84, 168, 336}}).verdict == Verdict::Yes);
  // a single support prime never covers
  const auto k1 = decide({3, {2, 4}});
  CHECK(k1.verdict == Verdict::No);
  CHECK(k1.uncovered == vec({1}));
}

TEST_CASE("skalba_condition_holds fixtures") {
  const auto p12 = profile_of(3, {2, 3, 6, 12});
  CHECK(skalba_condition_holds(p12, vec({1, 1, 1, 1})));
  const auto p6 = profile_of(3, {2, 3, 6});
  CHECK_FALSE(skalba_condition_holds(p6, vec({1, 1, 2})));
  const auto single = profile_from_exponents(3, mat({{1}, {0}}), {2, 5});
  CHECK_FALSE(skalba_condition_holds(single, vec({1})));
  CHECK_THROWS_AS(skalba_condition_holds(p6, vec({1, 0, 2})), std::invalid_argument);
  CHECK_THROWS_AS(skalba_condition_holds(p6, vec({1, 1})), std::invalid_argument);
}

TEST_CASE("skalba_oracle fixtures") {
  CHECK(skalba_oracle(profile_of(3, {2, 3, 6, 12})));
  CHECK(skalba_first_failure(profile_of(3, {2, 3, 6})) == vec({1, 1, 2}));
  CHECK(skalba_oracle(profile_of(5, {2, 21, 42, 84, 168, 336})));
}

TEST_CASE("skalba_solve fixtures") {
  const auto p12 = profile_of(3, {2, 3, 6, 12});
  const auto cert = skalba_solve(p12, vec({1, 1, 1, 1}));
  REQUIRE(cert.has_value());
  CHECK(cert->f == vec({2, 2, 1, 0}));
  CHECK(cert->exponents == std::vector<std::int64_t>{2, 2, 1, 0});
  CHECK(cert->product == 216);
  CHECK(cert->root == 6);
  CHECK(verify_certificate(p12, *cert));

  CHECK_FALSE(skalba_solve(profile_of(3, {2, 3, 6}), vec({1, 1, 2})).has_value());

  auto forged = *cert;
  forged.root = 7;
  CHECK_FALSE(verify_certificate(p12, forged));
  forged = *cert;
  forged.f = vec({1, 1, 1, 0});
  CHECK_FALSE(verify_certificate(p12, forged));
}

TEST_CASE("counterexample_c fixtures") {
  CHECK(counterexample_c(profile_of(3, {2, 3, 6}), vec({1, 1})) == vec({1, 1, 2}));
  CHECK(counterexample_c(profile_of(3, {2, 3}), vec({1, 1})) == vec({1, 1}));
  CHECK(counterexample_c(profile_of(3, {2}), vec({2})) == vec({2}));
  CHECK_THROWS_AS(counterexample_c(profile_of(3, {2, 3, 6, 12}), vec({1, 1})), std::invalid_argument);
}

TEST_CASE("zero_entry_witness fixtures") {
  const auto p12 = profile_of(3, {2, 3, 6, 12});
  CHECK(zero_entry_witness(p12, vec({2, 1, 2, 1}), vec({1, 1})) == 3);
  CHECK(zero_entry_witness(p12, vec({1, 1, 1, 1}), vec({0, 0})) == 0);
  CHECK(zero_entry_witness(p12, vec({1, 2, 1, 2}), vec({1, 0})) == 1);
  // agrees with the covering assignment on every point
  const auto result = covers(hyperplanes_of(p12), 2, 3);
  for (std::uint64_t r = 0; r < 9; ++r) {
    CHECK(zero_entry_witness(p12, vec({1, 1, 1, 1}), point_from_rank(r, 2, 3)) ==
          static_cast<fq::Index>(result.assignment[r]));
  }
}

TEST_CASE("exponent_twist fixtures") {
  const auto squared = exponent_twist({3, {2, 3, 6, 12}}, vec({2, 2, 2, 2}));
  CHECK(squared.elements == std::vector<BigInt>{4, 9, 36, 144});
  CHECK(exponent_twist({3, {2, 3, 6, 12}}, vec({1, 1, 1, 1})).elements == std::vector<BigInt>{2, 3, 6, 12});
  const auto t5 = exponent_twist({5, {2, 21, 42, 84, 168, 336}}, vec({1, 2, 3, 4, 1, 2}));
  CHECK(t5.elements ==
        std::vector<BigInt>{2, 441, 74088, BigInt(84) * 84 * 84 * 84, 168, BigInt(336) * 336});
  CHECK_THROWS_AS(exponent_twist({3, {2, 3}}, vec({1, 3})), std::invalid_argument);
}

TEST_CASE("covering agrees with the Skalba condition on every small exponent matrix") {
  const std::int64_t q = 3;
  std::uint64_t instances = 0;
  for (fq::Index k = 1; k <= 2; ++k) {
    const auto primes = primes_avoiding(q, static_cast<std::size_t>(k));
    const std::uint64_t nonzero = point_count(k, q) - 1;
    for (fq::Index l = 1; l <= 3; ++l) {
      std::uint64_t total = 1;
      for (fq::Index j = 0; j < l; ++j) {
        total *= nonzero;
      }
      for (std::uint64_t code = 0; code < total; ++code) {
        fq::MatrixF nu(k, l);
        auto rest = code;
        for (fq::Index j = 0; j < l; ++j) {
          nu.col(j) = point_from_rank(1 + rest % nonzero, k, q);
          rest /= nonzero;
        }
        const auto profile = profile_from_exponents(q, nu, primes);
        const bool covered = covers(hyperplanes_of(profile), k, q).covered;
        const bool brute = oracle::skalba_all(nu, q);
        REQUIRE(covered == brute);
        REQUIRE(skalba_oracle(profile) == brute);
        ++instances;
      }
    }
  }
  CHECK(instances == 2 + 4 + 8 + 8 + 64 + 512);
}

TEST_CASE("covering agrees with the Skalba condition on random q = 5 matrices") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<fq::Index> pick_k(1, 3);
  std::uniform_int_distribution<fq::Index> pick_l(1, 7);
  int covering = 0;
  for (int t = 0; t < 200; ++t) {
    const auto k = pick_k(rng);
    auto nu = random_nu(rng, k, pick_l(rng), 5);
    if (t % 4 == 0 && k >= 2) {
      // splice in a pencil so that covering families are well represented
      const auto pencil = synthesize_covering(k, 5);
      fq::MatrixF wide(k, nu.cols() + 6);
      wide << fq::MatrixF::Zero(k, 6), nu;
      for (int j = 0; j < 6; ++j) {
        wide.col(j) = pencil[static_cast<std::size_t>(j)].normal;
      }
      nu = wide.leftCols(std::min<fq::Index>(wide.cols(), 8));
    }
    const auto profile = profile_from_exponents(5, nu, primes_avoiding(5, static_cast<std::size_t>(k)));
    const auto result = covers(hyperplanes_of(profile), k, 5);
    CHECK(result.covered == skalba_oracle(profile));
    covering += result.covered ? 1 : 0;
    if (result.covered) {
      const auto cert = skalba_solve(profile, fq::VectorF::Ones(nu.cols()));
      REQUIRE(cert.has_value());
      CHECK(verify_certificate(profile, *cert));
    } else {
      const auto c = counterexample_c(profile, *result.witness);
      CHECK(oracle::times(*result.witness, twisted_matrix(profile, c), 5) == fq::VectorF::Ones(nu.cols()));
      CHECK_FALSE(skalba_condition_holds(profile, c));
    }
  }
  CHECK(covering > 0);
}

TEST_CASE("certificates verify for every twist of covering families") {
  for (std::int64_t q : {3, 5}) {
    const auto pencil = synthesize_covering(2, q);
    fq::MatrixF nu(2, q + 1);
    for (std::size_t j = 0; j < pencil.size(); ++j) {
      nu.col(static_cast<fq::Index>(j)) = pencil[j].normal;
    }
    const auto profile = profile_from_exponents(q, nu, primes_avoiding(q, 2));
    for (const auto& shifted : oracle::cube(nu.cols(), q - 1)) {
      const fq::VectorF c = (shifted.array() + 1).matrix();
      const auto cert = skalba_solve(profile, c);
      REQUIRE(cert.has_value());
      REQUIRE(verify_certificate(profile, *cert));
      CHECK(profile.field().reduce(cert->f.sum()) != 0);
    }
  }
}

TEST_CASE("verdict invariances") {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<long> pick_m(2, 9);
  for (std::int64_t q : {3, 5}) {
    for (int t = 0; t < 100; ++t) {
      const QInput input{q, random_set(rng, q, 6)};
      const auto verdict = decide(input).verdict;

      std::uniform_int_distribution<std::int64_t> pick_a(1, q - 1);
      fq::VectorF a(static_cast<fq::Index>(input.elements.size()));
      for (fq::Index j = 0; j < a.size(); ++j) {
        a(j) = pick_a(rng);
      }
      CHECK(decide(exponent_twist(input, a)).verdict == verdict);

      auto negated = input;
      negated.elements[0] = -negated.elements[0];
      CHECK(decide(negated).verdict == verdict);

      auto scaled = input;
      BigInt m = pick_m(rng);
      BigInt mq;
      mpz_pow_ui(mq.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(q));
      scaled.elements.back() *= mq;
      CHECK(decide(scaled).verdict == verdict);

      auto doubled = input;
      doubled.elements.insert(doubled.elements.end(), input.elements.begin(), input.elements.end());
      CHECK(decide(doubled).verdict == verdict);

      if (verdict != Verdict::TriviallyYes && input.elements.size() <= static_cast<std::size_t>(q)) {
        CHECK(verdict == Verdict::No);
      }
    }
  }
}
