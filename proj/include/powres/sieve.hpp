#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace powres {

inline constexpr std::uint64_t kSieveSegment = 1'000'000;

/// Segmented sieve of Eratosthenes. Calls `visit` on every prime <= bound in
/// increasing order until it returns false.
void for_each_prime(std::uint64_t bound, const std::function<bool(std::uint64_t)>& visit);

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

}  // namespace powres
