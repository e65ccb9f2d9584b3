#include "powres/arith.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <tuple>

namespace powres {

namespace {

// Bases 2..41 make Miller-Rabin deterministic below this bound
// (Sorenson and Webster).
const BigInt kDeterministicBound("3317044064679887385961981");

constexpr std::array<unsigned long, 13> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
constexpr int kRandomRounds = 64;

bool miller_rabin_round(const BigInt& n, const BigInt& n_minus_1, const BigInt& odd_part,
                        unsigned long twos, const BigInt& base) {
  BigInt x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), odd_part.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) {
    return true;
  }
  for (unsigned long r = 1; r < twos; ++r) {
    x = (x * x) % n;
    if (x == n_minus_1) {
      return true;
    }
    if (x == 1) {
      return false;
    }
  }
  return false;
}

std::vector<std::uint32_t> sieve_small_primes(std::uint32_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (composite[i]) {
      continue;
    }
    primes.push_back(i);
    for (std::uint64_t j = std::uint64_t{i} * i; j <= limit; j += i) {
      composite[j] = true;
    }
  }
  return primes;
}

class Factorizer {
public:
  explicit Factorizer(std::uint64_t seed) : seed_(seed) {}

  void add(const BigInt& prime, unsigned long exponent) { factors_[prime] += exponent; }

  // n > 1 with no prime factor below kTrialDivisionBound.
  void split(const BigInt& n, unsigned long multiplicity) {
    if (n == 1) {
      return;
    }
    if (is_probable_prime(n)) {
      add(n, multiplicity);
      return;
    }
    if (mpz_perfect_power_p(n.get_mpz_t()) != 0) {
      const auto bits = mpz_sizeinbase(n.get_mpz_t(), 2);
      for (unsigned long e = bits; e >= 2; --e) {
        BigInt root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
          split(root, multiplicity * e);
          return;
        }
      }
    }
    const BigInt d = brent_rho(n);
    split(d, multiplicity);
    split(BigInt(n / d), multiplicity);
  }

  const std::map<BigInt, unsigned long>& factors() const { return factors_; }

private:
  BigInt brent_rho(const BigInt& n) {
    if (mpz_even_p(n.get_mpz_t()) != 0) {
      return 2;
    }
    constexpr unsigned long kBatch = 128;
    while (true) {
      BigInt y = rng().get_z_range(n - 1) + 1;
      const BigInt c = rng().get_z_range(n - 1) + 1;
      auto step = [&](BigInt& v) {
        v = (v * v + c) % n;
      };
      BigInt g = 1;
      BigInt acc = 1;
      BigInt x;
      BigInt ys;
      unsigned long r = 1;
      while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) {
          step(y);
        }
        unsigned long k = 0;
        while (k < r && g == 1) {
          ys = y;
          const unsigned long batch = std::min(kBatch, r - k);
          for (unsigned long i = 0; i < batch; ++i) {
            step(y);
            acc = (acc * abs(x - y)) % n;
          }
          g = gcd(acc, n);
          k += kBatch;
        }
        r *= 2;
      }
      if (g == n) {
        do {
          step(ys);
          g = gcd(abs(x - ys), n);
        } while (g == 1);
      }
      if (g != n) {
        return g;
      }
    }
  }

  // Seeding the Mersenne twister costs about as much as a small factorization,
  // so it only happens once rho is actually needed.
  gmp_randclass& rng() {
    if (!rng_) {
      rng_.emplace(gmp_randinit_mt);
      rng_->seed(seed_);
    }
    return *rng_;
  }

  std::uint64_t seed_;
  std::optional<gmp_randclass> rng_;
  std::map<BigInt, unsigned long> factors_;
};

}  // namespace

BigInt FactoredInteger::value() const {
  BigInt v = sign;
  for (const auto& [p, e] : factors) {
    BigInt pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    v *= pe;
  }
  return v;
}

std::string FactoredInteger::to_string() const {
  std::ostringstream os;
  if (sign < 0) {
    os << "-";
  }
  if (factors.empty()) {
    os << "1";
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i > 0) {
      os << "*";
    }
    os << factors[i].prime.get_str();
    if (factors[i].exponent > 1) {
      os << "^" << factors[i].exponent;
    }
  }
  return os.str();
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = sieve_small_primes(kTrialDivisionBound);
  return primes;
}

bool is_probable_prime(const BigInt& n, std::uint64_t seed) {
  if (n < 2) {
    return false;
  }
  for (unsigned long p : kWitnesses) {
    if (n == p) {
      return true;
    }
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      return false;
    }
  }
  const BigInt n_minus_1 = n - 1;
  BigInt odd_part = n_minus_1;
  const unsigned long twos = mpz_scan1(odd_part.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(odd_part.get_mpz_t(), odd_part.get_mpz_t(), twos);

  for (unsigned long a : kWitnesses) {
    if (!miller_rabin_round(n, n_minus_1, odd_part, twos, BigInt(a))) {
      return false;
    }
  }
  if (n < kDeterministicBound) {
    return true;
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(seed);
  for (int round = 0; round < kRandomRounds; ++round) {
    const BigInt a = rng.get_z_range(n - 3) + 2;
    if (!miller_rabin_round(n, n_minus_1, odd_part, twos, a)) {
      return false;
    }
  }
  return true;
}

FactoredInteger factorize(const BigInt& n, std::uint64_t seed) {
  if (n == 0) {
    throw std::invalid_argument("factorize: zero has no prime factorization");
  }
  FactoredInteger out;
  out.sign = n < 0 ? -1 : 1;
  BigInt rest = abs(n);

  Factorizer factorizer(seed);
  bool exhausted_by_sqrt = false;
  if (rest.fits_ulong_p()) {
    unsigned long m = rest.get_ui();
    for (std::uint32_t p : small_primes()) {
      if (std::uint64_t{p} * p > m) {
        exhausted_by_sqrt = true;
        break;
      }
      unsigned long e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      if (e > 0) {
        factorizer.add(p, e);
      }
    }
    rest = m;
  } else {
    for (std::uint32_t p : small_primes()) {
      if (BigInt(p) * p > rest) {
        exhausted_by_sqrt = true;
        break;
      }
      unsigned long e = 0;
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++e;
      }
      if (e > 0) {
        factorizer.add(p, e);
      }
    }
  }
  if (rest > 1) {
    if (exhausted_by_sqrt) {
      factorizer.add(rest, 1);
    } else {
      factorizer.split(rest, 1);
    }
  }
  for (const auto& [p, e] : factorizer.factors()) {
    out.factors.push_back({p, e});
  }
  if (out.value() != n) {
    throw InvariantViolation("factorize: product of factors does not reconstruct " + n.get_str());
  }
  return out;
}

std::optional<BigInt> integer_qth_root(const BigInt& n, unsigned long q) {
  if (n < 1) {
    throw std::invalid_argument("integer_qth_root: n must be >= 1");
  }
  if (q < 2) {
    throw std::invalid_argument("integer_qth_root: q must be >= 2");
  }
  BigInt r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), q);
  BigInt check;
  mpz_pow_ui(check.get_mpz_t(), r.get_mpz_t(), q);
  if (check != n) {
    return std::nullopt;
  }
  return r;
}

bool is_perfect_qth_power(const BigInt& b, unsigned long q) {
  if (b == 0) {
    throw std::invalid_argument("is_perfect_qth_power: b must be nonzero");
  }
  if (b < 0 && q % 2 == 0) {
    return false;
  }
  return integer_qth_root(abs(b), q).has_value();
}

BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& modulus) {
  if (modulus < 2) {
    throw std::invalid_argument("mod_pow: modulus must be >= 2");
  }
  if (exp < 0) {
    throw std::invalid_argument("mod_pow: exponent must be nonnegative");
  }
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) {
      result = mul_mod(result, base, m);
    }
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  __int128 old_r = static_cast<__int128>(a % m);
  __int128 r = static_cast<__int128>(m);
  __int128 old_s = 1;
  __int128 s = 0;
  while (r != 0) {
    const __int128 quot = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - quot * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - quot * s);
  }
  if (old_r != 1) {
    throw std::invalid_argument("mod_inverse: argument is not invertible");
  }
  const __int128 mm = static_cast<__int128>(m);
  return static_cast<std::uint64_t>(((old_s % mm) + mm) % mm);
}

std::uint64_t mod_u64(const BigInt& b, std::uint64_t m) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
  return mpz_fdiv_ui(b.get_mpz_t(), m);
}

BigInt parse_integer(const std::string& text) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    i = 1;
  }
  if (i == text.size()) {
    throw std::invalid_argument("not an integer: '" + text + "'");
  }
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') {
      throw std::invalid_argument("not an integer: '" + text + "'");
    }
  }
  return BigInt(text[0] == '+' ? text.substr(1) : text, 10);
}

}  // namespace powres
