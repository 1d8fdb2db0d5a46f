#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hyperstore/geometry.hpp"

namespace hyperstore::oracle {

/// Sieve of Eratosthenes over [0, limit].
class SieveTable {
public:
    explicit SieveTable(std::uint64_t limit);

    std::uint64_t limit() const noexcept { return limit_; }
    bool is_prime(std::uint64_t v) const { return v <= limit_ && is_prime_[v]; }
    const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
    /// pi(limit)
    std::size_t count() const noexcept { return primes_.size(); }

private:
    std::uint64_t limit_;
    std::vector<bool> is_prime_;
    std::vector<std::uint64_t> primes_;
};

SieveTable sieve(std::uint64_t limit);

/// Primes strictly below `bound`.
std::vector<std::uint64_t> primes_below(std::uint64_t bound);

struct Verdict {
    enum class Kind { pass, unseparated_pair, incidence, dimension_mismatch };
    Kind kind = Kind::pass;
    std::size_t first = 0;   // offending point
    std::size_t second = 0;  // its twin, for unseparated_pair
    std::size_t plane = 0;   // for incidence

    bool passed() const noexcept { return kind == Kind::pass; }
    std::string describe() const;
};

/// Recomputes every orientation vector from scratch and checks all pairs:
/// each pair must differ in at least one component and no point may lie
/// within epsilon of a plane.
Verdict verify_separation(std::span<const Point> points, std::span<const Plane> planes,
                          double epsilon = default_epsilon);

/// Thresholds x_i = k + 1/2 for k = 0..base-2 on every axis, written as
/// 1 + alpha.x = 0. Separates every set of distinct digit points.
std::vector<Plane> coordinate_plane_separator(std::size_t n, unsigned base = 10);

}  // namespace hyperstore::oracle
