#include "powres/sieve.hpp"

#include <algorithm>
#include <cmath>

namespace powres {

void for_each_prime(std::uint64_t bound, const std::function<bool(std::uint64_t)>& visit) {
  if (bound < 2) {
    return;
  }
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(bound)));
  while (root * root > bound) {
    --root;
  }
  while ((root + 1) * (root + 1) <= bound) {
    ++root;
  }

  std::vector<bool> base_composite(root + 1, false);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!base_composite[i]) {
      base.push_back(i);
      for (std::uint64_t j = i * i; j <= root; j += i) {
        base_composite[j] = true;
      }
    }
  }

  std::vector<bool> composite;
  for (std::uint64_t lo = 2; lo <= bound; lo += kSieveSegment) {
    const std::uint64_t hi = std::min(bound, lo + kSieveSegment - 1);
    composite.assign(hi - lo + 1, false);
    for (std::uint64_t p : base) {
      if (p * p > hi) {
        break;
      }
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= hi; m += p) {
        composite[m - lo] = true;
      }
    }
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (!composite[n - lo] && !visit(n)) {
        return;
      }
    }
  }
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  for_each_prime(bound, [&out](std::uint64_t p) {
    out.push_back(p);
    return true;
  });
  return out;
}

}  // namespace powres
