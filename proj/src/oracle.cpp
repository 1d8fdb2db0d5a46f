#include "hyperstore/oracle.hpp"

#include <stdexcept>

namespace hyperstore::oracle {

SieveTable::SieveTable(std::uint64_t limit) : limit_(limit), is_prime_(limit + 1, true) {
    if (limit < 2) throw std::invalid_argument("sieve limit must be at least 2");
    is_prime_[0] = false;
    is_prime_[1] = false;
    for (std::uint64_t i = 2; i * i <= limit; ++i)
        if (is_prime_[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) is_prime_[j] = false;
    for (std::uint64_t v = 2; v <= limit; ++v)
        if (is_prime_[v]) primes_.push_back(v);
}

SieveTable sieve(std::uint64_t limit) { return SieveTable(limit); }

std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
    if (bound <= 2) return {};
    return SieveTable(bound - 1).primes();
}

std::string Verdict::describe() const {
    switch (kind) {
        case Kind::pass:
            return "pass";
        case Kind::unseparated_pair:
            return "points " + std::to_string(first) + " and " + std::to_string(second) +
                   " share an orientation vector";
        case Kind::incidence:
            return "point " + std::to_string(first) + " lies on plane " + std::to_string(plane);
        case Kind::dimension_mismatch:
            return "point " + std::to_string(first) + " or plane " + std::to_string(plane) +
                   " has the wrong dimension";
    }
    return "unknown";
}

Verdict verify_separation(std::span<const Point> points, std::span<const Plane> planes,
                          double epsilon) {
    Verdict v;
    if (points.empty()) return v;
    const std::size_t n = points[0].dimension();
    for (std::size_t j = 0; j < planes.size(); ++j)
        if (planes[j].alpha.size() != n) return {Verdict::Kind::dimension_mismatch, 0, 0, j};

    // Signs packed 64 per word, row-major: one row per point.
    const std::size_t q = planes.size();
    const std::size_t words = (q + 63) / 64;
    std::vector<std::uint64_t> sign_bits(points.size() * words, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].dimension() != n) return {Verdict::Kind::dimension_mismatch, i, 0, 0};
        for (std::size_t j = 0; j < q; ++j) {
            long double r = 1.0L;
            for (std::size_t k = 0; k < n; ++k)
                r += static_cast<long double>(planes[j].alpha[k]) * points[i][k];
            if (!(r > epsilon || r < -epsilon)) return {Verdict::Kind::incidence, i, 0, j};
            if (r > 0) sign_bits[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
        }
    }
    for (std::size_t a = 0; a < points.size(); ++a) {
        const std::uint64_t* ra = &sign_bits[a * words];
        for (std::size_t b = a + 1; b < points.size(); ++b) {
            const std::uint64_t* rb = &sign_bits[b * words];
            bool differ = false;
            for (std::size_t w = 0; w < words && !differ; ++w) differ = ra[w] != rb[w];
            if (!differ) return {Verdict::Kind::unseparated_pair, a, b, 0};
        }
    }
    return v;
}

std::vector<Plane> coordinate_plane_separator(std::size_t n, unsigned base) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    std::vector<Plane> planes;
    planes.reserve(n * (base - 1));
    for (std::size_t axis = 0; axis < n; ++axis)
        for (unsigned k = 0; k + 1 < base; ++k) {
            Plane p{std::vector<double>(n, 0.0), true};
            p.alpha[axis] = -1.0 / (k + 0.5);
            planes.push_back(std::move(p));
        }
    return planes;
}

}  // namespace hyperstore::oracle
