#include "powres/covering.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <string>

namespace powres {

namespace {

void validate_family(std::span<const Hyperplane> planes, fq::Index k, std::int64_t q) {
  if (k < 1) {
    throw std::invalid_argument("ambient dimension must be >= 1");
  }
  if (planes.size() >= std::numeric_limits<std::uint16_t>::max()) {
    throw GuardError("too many hyperplanes");
  }
  for (const auto& h : planes) {
    if (h.modulus != q) {
      throw std::invalid_argument("hyperplane modulus " + std::to_string(h.modulus) +
                                  " does not match field size " + std::to_string(q));
    }
    if (h.ambient_dim() != k) {
      throw std::invalid_argument("hyperplane dimension " + std::to_string(h.ambient_dim()) +
                                  " does not match ambient dimension " + std::to_string(k));
    }
  }
}

// Walks F_q^k in lexicographic order while keeping every normal . x current.
// Moving to the next point bumps one coordinate and zeroes the ones after it,
// so each dot product changes by n[i] - (q - 1) * (n[i+1] + ... + n[k-1]).
class PointWalker {
public:
  PointWalker(std::span<const Hyperplane> planes, fq::Index k, std::int64_t q)
      : field_(q), planes_(planes), point_(fq::VectorF::Zero(k)), dots_(planes.size(), 0) {
    suffix_.resize(planes.size());
    for (std::size_t h = 0; h < planes.size(); ++h) {
      auto& s = suffix_[h];
      s.assign(static_cast<std::size_t>(k) + 1, 0);
      for (fq::Index i = k - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = field_.add(s[static_cast<std::size_t>(i) + 1], planes[h].normal(i));
      }
    }
  }

  const fq::VectorF& point() const { return point_; }

  /// Index of the first hyperplane containing the current point, or -1.
  std::ptrdiff_t first_containing() const {
    for (std::size_t h = 0; h < dots_.size(); ++h) {
      if (dots_[h] == 0) {
        return static_cast<std::ptrdiff_t>(h);
      }
    }
    return -1;
  }

  bool next() {
    const std::int64_t top = field_.modulus() - 1;
    fq::Index i = point_.size() - 1;
    while (i >= 0 && point_(i) == top) {
      --i;
    }
    if (i < 0) {
      return false;
    }
    point_(i) += 1;
    point_.tail(point_.size() - i - 1).setZero();
    const auto next_index = static_cast<std::size_t>(i) + 1;
    for (std::size_t h = 0; h < dots_.size(); ++h) {
      dots_[h] = field_.reduce(dots_[h] + planes_[h].normal(i) - top * suffix_[h][next_index]);
    }
    return true;
  }

private:
  fq::Field field_;
  std::span<const Hyperplane> planes_;
  fq::VectorF point_;
  std::vector<std::int64_t> dots_;
  std::vector<std::vector<std::int64_t>> suffix_;
};

using Bits = std::vector<std::uint64_t>;

std::size_t popcount(const Bits& bits) {
  std::size_t n = 0;
  for (auto w : bits) {
    n += static_cast<std::size_t>(std::popcount(w));
  }
  return n;
}

bool test_bit(const Bits& bits, std::size_t i) { return ((bits[i / 64] >> (i % 64)) & 1U) != 0; }

// Exact minimum set cover of the nonzero points by hyperplane point sets.
class CoverSearch {
public:
  CoverSearch(std::vector<Bits> plane_bits, std::size_t points, std::size_t per_plane, std::size_t floor)
      : plane_bits_(std::move(plane_bits)), points_(points), per_plane_(per_plane), floor_(floor) {}

  std::vector<std::size_t> run() {
    best_ = greedy();
    std::vector<std::size_t> chosen;
    search(Bits((points_ + 63) / 64, 0), chosen);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

private:
  std::vector<std::size_t> greedy() const {
    Bits covered((points_ + 63) / 64, 0);
    std::vector<std::size_t> picks;
    while (popcount(covered) < points_) {
      std::size_t best_gain = 0;
      std::size_t best_plane = 0;
      for (std::size_t h = 0; h < plane_bits_.size(); ++h) {
        std::size_t gain = 0;
        for (std::size_t w = 0; w < covered.size(); ++w) {
          gain += static_cast<std::size_t>(std::popcount(plane_bits_[h][w] & ~covered[w]));
        }
        if (gain > best_gain) {
          best_gain = gain;
          best_plane = h;
        }
      }
      if (best_gain == 0) {
        throw InvariantViolation("minimal_cover: greedy pass stalled on a covering family");
      }
      picks.push_back(best_plane);
      for (std::size_t w = 0; w < covered.size(); ++w) {
        covered[w] |= plane_bits_[best_plane][w];
      }
    }
    return picks;
  }

  void search(const Bits& covered, std::vector<std::size_t>& chosen) {
    const std::size_t done = popcount(covered);
    if (done == points_) {
      if (chosen.size() < best_.size()) {
        best_ = chosen;
      }
      return;
    }
    const std::size_t remaining = points_ - done;
    const std::size_t bound =
        std::max(chosen.size() + (remaining + per_plane_ - 1) / per_plane_, floor_);
    if (bound >= best_.size()) {
      return;
    }
    // Branch on the uncovered point lying on the fewest candidate planes.
    std::size_t pivot = points_;
    std::size_t pivot_degree = std::numeric_limits<std::size_t>::max();
    for (std::size_t p = 0; p < points_; ++p) {
      if (test_bit(covered, p)) {
        continue;
      }
      std::size_t degree = 0;
      for (const auto& bits : plane_bits_) {
        degree += test_bit(bits, p) ? 1 : 0;
      }
      if (degree < pivot_degree) {
        pivot = p;
        pivot_degree = degree;
      }
    }
    for (std::size_t h = 0; h < plane_bits_.size(); ++h) {
      if (!test_bit(plane_bits_[h], pivot)) {
        continue;
      }
      Bits next = covered;
      for (std::size_t w = 0; w < next.size(); ++w) {
        next[w] |= plane_bits_[h][w];
      }
      chosen.push_back(h);
      search(next, chosen);
      chosen.pop_back();
      if (best_.size() == floor_) {
        return;
      }
    }
  }

  std::vector<Bits> plane_bits_;
  std::size_t points_;
  std::size_t per_plane_;
  std::size_t floor_;
  std::vector<std::size_t> best_;
};

constexpr std::uint64_t kMaxCoverSearchPoints = 1'000'000;

}  // namespace

Hyperplane Hyperplane::make(fq::VectorF normal, std::int64_t q) {
  const fq::Field field(q);
  if (normal.size() == 0) {
    throw std::invalid_argument("hyperplane normal must have positive length");
  }
  if (!fq::is_reduced(normal, field)) {
    throw std::invalid_argument("hyperplane normal has entries outside [0, q)");
  }
  if (normal.isZero()) {
    throw std::invalid_argument("hyperplane normal must be nonzero");
  }
  return Hyperplane{std::move(normal), q};
}

bool Hyperplane::contains(const fq::VectorF& x) const {
  return fq::dot(normal, x, fq::Field(modulus)) == 0;
}

std::uint64_t point_count(fq::Index k, std::int64_t q, std::uint64_t limit) {
  std::uint64_t n = 1;
  for (fq::Index i = 0; i < k; ++i) {
    if (n > limit / static_cast<std::uint64_t>(q)) {
      throw GuardError(std::to_string(q) + "^" + std::to_string(k) + " points exceeds the enumeration limit of " +
                       std::to_string(limit));
    }
    n *= static_cast<std::uint64_t>(q);
  }
  return n;
}

fq::VectorF point_from_rank(std::uint64_t rank, fq::Index k, std::int64_t q) {
  fq::VectorF x(k);
  for (fq::Index i = k - 1; i >= 0; --i) {
    x(i) = static_cast<std::int64_t>(rank % static_cast<std::uint64_t>(q));
    rank /= static_cast<std::uint64_t>(q);
  }
  return x;
}

std::uint64_t rank_of_point(const fq::VectorF& x, std::int64_t q) {
  std::uint64_t rank = 0;
  for (fq::Index i = 0; i < x.size(); ++i) {
    rank = rank * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(x(i));
  }
  return rank;
}

CoveringResult covers(std::span<const Hyperplane> planes, fq::Index k, std::int64_t q, std::uint64_t limit) {
  validate_family(planes, k, q);
  const std::uint64_t n = point_count(k, q, limit);
  CoveringResult result;
  if (planes.empty()) {
    result.witness = fq::VectorF::Zero(k);
    return result;
  }
  result.assignment.resize(n);
  PointWalker walker(planes, k, q);
  std::uint64_t rank = 0;
  do {
    const auto h = walker.first_containing();
    if (h < 0) {
      result.assignment.clear();
      result.assignment.shrink_to_fit();
      result.witness = walker.point();
      return result;
    }
    result.assignment[rank++] = static_cast<std::uint16_t>(h);
  } while (walker.next());
  result.covered = true;
  return result;
}

std::uint64_t count_uncovered(std::span<const Hyperplane> planes, fq::Index k, std::int64_t q,
                              std::uint64_t limit) {
  validate_family(planes, k, q);
  const std::uint64_t n = point_count(k, q, limit);
  if (planes.empty()) {
    return n;
  }
  std::uint64_t uncovered = 0;
  PointWalker walker(planes, k, q);
  do {
    uncovered += walker.first_containing() < 0 ? 1 : 0;
  } while (walker.next());
  return uncovered;
}

bool verify_covering(const CoveringResult& result, std::span<const Hyperplane> planes, fq::Index k,
                     std::int64_t q) {
  if (result.covered == result.witness.has_value()) {
    return false;
  }
  if (!result.covered) {
    const auto& d = *result.witness;
    return d.size() == k && std::none_of(planes.begin(), planes.end(),
                                         [&d](const Hyperplane& h) { return h.contains(d); });
  }
  const std::uint64_t n = point_count(k, q);
  if (result.assignment.size() != n) {
    return false;
  }
  for (std::uint64_t rank = 0; rank < n; ++rank) {
    const auto h = result.assignment[rank];
    if (h >= planes.size() || !planes[h].contains(point_from_rank(rank, k, q))) {
      return false;
    }
  }
  return true;
}

std::optional<std::vector<std::size_t>> minimal_cover(std::span<const Hyperplane> planes, fq::Index k,
                                                      std::int64_t q) {
  const std::uint64_t n = point_count(k, q, kMaxCoverSearchPoints);
  if (!covers(planes, k, q).covered) {
    return std::nullopt;
  }
  // Proportional normals describe the same hyperplane; keep the first.
  std::vector<std::size_t> representatives;
  std::map<std::vector<std::int64_t>, std::size_t> seen;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const auto canonical = normalize_hyperplane(planes[i]).normal;
    std::vector<std::int64_t> key(canonical.data(), canonical.data() + canonical.size());
    if (seen.emplace(std::move(key), i).second) {
      representatives.push_back(i);
    }
  }

  // Bit p - 1 stands for the nonzero point of rank p.
  const std::size_t points = static_cast<std::size_t>(n - 1);
  std::vector<Bits> plane_bits;
  for (std::size_t i : representatives) {
    Bits bits((points + 63) / 64, 0);
    for (std::size_t p = 0; p < points; ++p) {
      if (planes[i].contains(point_from_rank(p + 1, k, q))) {
        bits[p / 64] |= std::uint64_t{1} << (p % 64);
      }
    }
    plane_bits.push_back(std::move(bits));
  }
  const std::size_t per_plane = static_cast<std::size_t>(n / static_cast<std::uint64_t>(q)) - 1;
  const std::size_t floor = k >= 2 ? static_cast<std::size_t>(q) + 1 : 1;
  CoverSearch search(std::move(plane_bits), points, std::max<std::size_t>(per_plane, 1), floor);

  std::vector<std::size_t> picked;
  for (std::size_t r : search.run()) {
    picked.push_back(representatives[r]);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<Hyperplane> synthesize_covering(fq::Index k, std::int64_t q) {
  if (k < 2) {
    throw std::invalid_argument("synthesize_covering: dimension must be >= 2");
  }
  const fq::Field field(q);
  std::vector<Hyperplane> out;
  auto push = [&](std::int64_t a, std::int64_t b) {
    fq::VectorF normal = fq::VectorF::Zero(k);
    normal(0) = a;
    normal(1) = b;
    out.push_back(Hyperplane::make(std::move(normal), q));
  };
  push(1, 0);
  push(0, 1);
  for (std::int64_t t = 1; t < q; ++t) {
    push(1, t);
  }
  return out;
}

Hyperplane normalize_hyperplane(const Hyperplane& h) {
  const fq::Field field(h.modulus);
  for (fq::Index i = 0; i < h.normal.size(); ++i) {
    if (h.normal(i) != 0) {
      const auto scale = field.inv(h.normal(i));
      return Hyperplane{fq::reduced(h.normal * scale, field), h.modulus};
    }
  }
  throw std::invalid_argument("normalize_hyperplane: zero normal");
}

}  // namespace powres
