#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hyperstore/oracle.hpp"

using namespace hyperstore;

namespace {

bool trial_division(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("primes below 100") {
    const auto p = oracle::primes_below(100);
    CHECK(p.size() == 25);
    CHECK(p.front() == 2);
    CHECK(p.back() == 97);
    CHECK(oracle::primes_below(2).empty());
    CHECK(oracle::primes_below(3) == std::vector<std::uint64_t>{2});
}

TEST_CASE("sieve agrees with trial division") {
    const auto s = oracle::sieve(100000);
    for (std::uint64_t v = 0; v <= 100000; ++v) REQUIRE(s.is_prime(v) == trial_division(v));
    CHECK(s.count() == 9592);
    CHECK_FALSE(s.is_prime(100001));
    CHECK_THROWS_AS(oracle::SieveTable(1), std::invalid_argument);
}

TEST_CASE("prime counts stay near x / ln x") {
    // pi(10^n) against the prime number theorem estimate.
    std::uint64_t bound = 10;
    for (int n = 1; n <= 6; ++n, bound *= 10) {
        const auto pi = static_cast<double>(oracle::primes_below(bound).size());
        const double est = static_cast<double>(bound) / std::log(static_cast<double>(bound));
        if (n < 2) continue;
        CHECK(std::abs(pi - est) <= 0.15 * pi);
        CHECK(pi > est);
    }
}

TEST_CASE("verify_separation reports each failure kind") {
    const std::vector<Plane> planes{{{-0.2, 0.0}, true}};
    SUBCASE("pass") {
        CHECK(oracle::verify_separation(std::vector<Point>{{1, 1}, {9, 1}}, planes).passed());
    }
    SUBCASE("unseparated pair") {
        const auto v = oracle::verify_separation(std::vector<Point>{{1, 1}, {9, 1}, {2, 3}}, planes);
        CHECK(v.kind == oracle::Verdict::Kind::unseparated_pair);
        CHECK(v.first == 0);
        CHECK(v.second == 2);
        CHECK_FALSE(v.describe().empty());
    }
    SUBCASE("incidence") {
        const auto v = oracle::verify_separation(std::vector<Point>{{1, 1}, {5, 1}}, planes);
        CHECK(v.kind == oracle::Verdict::Kind::incidence);
        CHECK(v.first == 1);
        CHECK(v.plane == 0);
    }
    SUBCASE("dimension mismatch") {
        const auto v = oracle::verify_separation(std::vector<Point>{{1, 1, 1}}, planes);
        CHECK(v.kind == oracle::Verdict::Kind::dimension_mismatch);
    }
}

TEST_CASE("coordinate planes separate every digit point") {
    const auto planes = oracle::coordinate_plane_separator(2);
    CHECK(planes.size() == 18);
    std::vector<Point> grid;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) grid.push_back(Point{double(a), double(b)});
    CHECK(oracle::verify_separation(grid, planes).passed());
    CHECK(oracle::coordinate_plane_separator(1).size() == 9);
    CHECK(oracle::coordinate_plane_separator(3, 4).size() == 9);
}

}  // TEST_SUITE
