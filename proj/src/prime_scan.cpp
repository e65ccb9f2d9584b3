#include "powres/prime_scan.hpp"

#include <numeric>
#include <string>

#include "powres/covering.hpp"
#include "powres/profile.hpp"
#include "powres/sieve.hpp"

namespace powres {

namespace {

void require_prime(std::uint64_t p) {
  if (!is_probable_prime(BigInt(std::to_string(p)))) {
    throw std::invalid_argument(std::to_string(p) + " is not prime");
  }
}

void require_split(std::uint64_t p, std::int64_t q) {
  if (q < 3 || (p - 1) % static_cast<std::uint64_t>(q) != 0) {
    throw std::invalid_argument("p = " + std::to_string(p) + " is not 1 mod " + std::to_string(q));
  }
}

void require_bound(std::uint64_t bound, std::uint64_t minimum) {
  if (bound < minimum) {
    throw std::invalid_argument("bound must be at least " + std::to_string(minimum));
  }
  if (bound > kMaxScanBound) {
    throw GuardError("bound " + std::to_string(bound) + " exceeds the scan limit of " + std::to_string(kMaxScanBound));
  }
}

// Residues of B modulo p, or nullopt if p is excluded.
std::optional<std::vector<std::uint64_t>> residues_if_admissible(std::span<const BigInt> elements,
                                                                 std::uint64_t p, std::int64_t q) {
  if (p == static_cast<std::uint64_t>(q)) {
    return std::nullopt;
  }
  std::vector<std::uint64_t> out;
  out.reserve(elements.size());
  for (const auto& b : elements) {
    const auto r = mod_u64(b, p);
    if (r == 0) {
      return std::nullopt;
    }
    out.push_back(r);
  }
  return out;
}

// Unchecked Euler criterion for one admissible prime.
bool some_residue(std::span<const std::uint64_t> residues, std::uint64_t p, std::int64_t q) {
  const auto uq = static_cast<std::uint64_t>(q);
  if ((p - 1) % uq != 0) {
    return true;
  }
  const std::uint64_t e = (p - 1) / uq;
  for (auto r : residues) {
    if (mod_pow(r, e, p) == 1) {
      return true;
    }
  }
  return false;
}

Ratio make_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) {
    return Ratio{0, 1};
  }
  const auto g = std::gcd(num, den);
  return g == 0 ? Ratio{0, 1} : Ratio{num / g, den / g};
}

}  // namespace

std::uint64_t least_primitive_root(std::uint64_t p) {
  require_prime(p);
  if (p == 2) {
    return 1;
  }
  std::vector<std::uint64_t> cofactors;
  for (const auto& f : factorize(BigInt(std::to_string(p - 1))).factors) {
    cofactors.push_back((p - 1) / std::stoull(f.prime.get_str()));
  }
  for (std::uint64_t g = 2; g < p; ++g) {
    bool generator = true;
    for (auto e : cofactors) {
      if (mod_pow(g, e, p) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) {
      return g;
    }
  }
  throw InvariantViolation("no primitive root modulo " + std::to_string(p));
}

std::uint64_t canonical_zeta(std::uint64_t p, std::int64_t q) {
  require_split(p, q);
  const auto g = least_primitive_root(p);
  return mod_pow(g, (p - 1) / static_cast<std::uint64_t>(q), p);
}

ResidueSymbol residue_symbol(const BigInt& b, std::uint64_t p, std::int64_t q) {
  const auto zeta = canonical_zeta(p, q);
  const auto r = mod_u64(b, p);
  if (r == 0) {
    throw ExcludedPrime(std::to_string(p) + " divides " + b.get_str());
  }
  const auto s = mod_pow(r, (p - 1) / static_cast<std::uint64_t>(q), p);
  std::uint64_t power = 1;
  for (std::int64_t j = 0; j < q; ++j) {
    if (power == s) {
      return ResidueSymbol{j, j == 0};
    }
    power = mul_mod(power, zeta, p);
  }
  throw InvariantViolation("residue_symbol: b^((p-1)/q) is not a q-th root of unity");
}

PrimeCheckReport has_qth_power_mod_p(std::span<const BigInt> elements, std::uint64_t p, std::int64_t q) {
  require_prime(p);
  if (p == static_cast<std::uint64_t>(q)) {
    throw ExcludedPrime("p = q = " + std::to_string(p) + " is excluded");
  }
  PrimeCheckReport report;
  report.p = p;
  report.splits = (p - 1) % static_cast<std::uint64_t>(q) == 0;
  const std::uint64_t e = (p - 1) / static_cast<std::uint64_t>(q);
  for (const auto& b : elements) {
    const auto r = mod_u64(b, p);
    if (r == 0) {
      throw ExcludedPrime("p = " + std::to_string(p) + " divides the element " + b.get_str());
    }
    const bool residue = !report.splits || mod_pow(r, e, p) == 1;
    report.per_element.push_back({b, residue});
    report.outcome = report.outcome || residue;
  }
  return report;
}

std::optional<std::uint64_t> find_counterexample_prime(std::span<const BigInt> elements, std::int64_t q,
                                                       std::uint64_t bound) {
  QInput{q, {elements.begin(), elements.end()}}.validate();
  require_bound(bound, 2);
  std::optional<std::uint64_t> found;
  for_each_prime(bound, [&](std::uint64_t p) {
    const auto residues = residues_if_admissible(elements, p, q);
    if (residues && !some_residue(*residues, p, q)) {
      found = p;
      return false;
    }
    return true;
  });
  return found;
}

DensityReport census(std::span<const BigInt> elements, std::int64_t q, std::uint64_t bound) {
  const QInput input{q, {elements.begin(), elements.end()}};
  input.validate();
  require_bound(bound, 100);

  DensityReport report;
  report.bound = bound;
  auto built = build_profile(input);
  std::uint64_t cells = 1;
  if (const auto* profile = std::get_if<ResidueProfile>(&built)) {
    const auto planes = hyperplanes_of(*profile);
    report.dimension = static_cast<std::uint64_t>(profile->dimension());
    report.uncovered_points = count_uncovered(planes, profile->dimension(), q);
    cells = point_count(profile->dimension(), q);
  }
  report.predicted = make_ratio(report.uncovered_points, cells * static_cast<std::uint64_t>(q - 1));

  for_each_prime(bound, [&](std::uint64_t p) {
    const auto residues = residues_if_admissible(elements, p, q);
    if (!residues) {
      ++report.excluded_primes;
      return true;
    }
    ++report.primes_checked;
    if ((p - 1) % static_cast<std::uint64_t>(q) == 0) {
      ++report.split_primes;
    }
    if (!some_residue(*residues, p, q)) {
      ++report.failing_count;
      if (report.failing_primes.size() < kListedFailures) {
        report.failing_primes.push_back(p);
      }
    }
    return true;
  });
  report.empirical = make_ratio(report.failing_count, report.primes_checked);
  return report;
}

std::optional<std::uint64_t> qth_root_mod_p(const BigInt& b, std::uint64_t p, std::int64_t q) {
  require_prime(p);
  const auto uq = static_cast<std::uint64_t>(q);
  if (p == uq) {
    throw ExcludedPrime("p = q is excluded");
  }
  const auto r = mod_u64(b, p);
  if (r == 0) {
    throw ExcludedPrime(std::to_string(p) + " divides " + b.get_str());
  }
  if ((p - 1) % uq != 0) {
    return mod_pow(r, mod_inverse(uq % (p - 1), p - 1), p);
  }
  if (mod_pow(r, (p - 1) / uq, p) != 1) {
    return std::nullopt;
  }

  // Adleman-Manders-Miller: p - 1 = q^s t with q not dividing t.
  std::uint64_t t = p - 1;
  unsigned s = 0;
  while (t % uq == 0) {
    t /= uq;
    ++s;
  }
  const std::uint64_t u = t == 1 ? 0 : mod_inverse(uq % t, t);
  std::uint64_t x = mod_pow(r, u, p);
  // error = x^q / b lies in the q-Sylow subgroup and has order dividing q^(s-1).
  std::uint64_t error = mul_mod(mod_pow(x, uq, p), mod_inverse(r, p), p);
  const std::uint64_t z = mod_pow(least_primitive_root(p), t, p);  // order q^s
  std::uint64_t zeta = z;
  for (unsigned i = 1; i < s; ++i) {
    zeta = mod_pow(zeta, uq, p);
  }
  while (error != 1) {
    unsigned j = 0;
    std::uint64_t probe = error;
    std::uint64_t top = error;  // error^(q^(j-1)) once the loop ends
    while (probe != 1) {
      top = probe;
      probe = mod_pow(probe, uq, p);
      ++j;
    }
    std::uint64_t a = 0;
    std::uint64_t power = 1;
    while (power != top) {
      power = mul_mod(power, zeta, p);
      if (++a >= uq) {
        throw InvariantViolation("qth_root_mod_p: element of order q is not a power of zeta");
      }
    }
    // w = z^(-a q^(s-j-1)) cancels the top-order component of the error.
    std::uint64_t y = z;
    for (unsigned i = 0; i + j + 1 < s; ++i) {
      y = mod_pow(y, uq, p);
    }
    std::uint64_t order = 1;  // q^(j+1)
    for (unsigned i = 0; i <= j; ++i) {
      order *= uq;
    }
    const std::uint64_t w = mod_pow(y, order - a, p);
    x = mul_mod(x, w, p);
    error = mul_mod(error, mod_pow(w, uq, p), p);
  }
  if (mod_pow(x, uq, p) != r) {
    throw InvariantViolation("qth_root_mod_p: computed root fails verification");
  }
  return x;
}

}  // namespace powres
