#include <cmath>
#include <vector>

#include "doctest.h"
#include "hyperstore/errors.hpp"
#include "hyperstore/geometry.hpp"
#include "hyperstore/random.hpp"

using namespace hyperstore;

namespace {

// Residual of a plane at a point, computed independently of the library.
double residual(const std::vector<double>& alpha, const std::vector<double>& x) {
    double r = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) r += alpha[i] * x[i];
    return r;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("evaluate_residual matches hand arithmetic") {
    OpCounter ops;
    CHECK(evaluate_residual(Plane{{1.0}, false}, Point{0.0}, ops) == 1.0);
    CHECK(evaluate_residual(Plane{{1.0, 0.0}, false}, Point{7.0, 3.0}, ops) == 8.0);
    CHECK(evaluate_residual(Plane{{-2.0 / 7.0, 0.0}, false}, Point{7.0, 3.0}, ops) ==
          doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(ops.multiplications == 1 + 2 + 2);
    CHECK(ops.additions == 1 + 2 + 2);
}

TEST_CASE("evaluate_residual rejects a dimension mismatch") {
    OpCounter ops;
    CHECK_THROWS_AS(evaluate_residual(Plane{{1.0, 0.0}, false}, Point{1.0}, ops), DimensionMismatch);
}

TEST_CASE("sign_of") {
    CHECK(sign_of(8.0, 1e-9) == Sign::positive);
    CHECK(sign_of(-1.0, 1e-9) == Sign::negative);
    CHECK(sign_of(0.0, 1e-9) == Sign::incident);
    CHECK(sign_of(1e-9, 1e-9) == Sign::incident);
    CHECK(sign_of(-2e-9, 1e-9) == Sign::negative);
}

TEST_CASE("position_vector and orientation_vector") {
    const std::vector<Plane> planes{{{1.0, 0.0}, false}, {{0.0, 1.0}, false}};
    OpCounter ops;
    const PositionVector pv = position_vector(planes, Point{7.0, 3.0}, ops);
    REQUIRE(pv.size() == 2);
    CHECK(pv.residuals[0] == 8.0);
    CHECK(pv.residuals[1] == 4.0);

    const OrientationVector ov = orientation_vector(planes, Point{7.0, 3.0}, 1e-9, ops);
    REQUIRE(ov.size() == 2);
    CHECK(ov[0] == 1);
    CHECK(ov[1] == 1);
    CHECK(ops.sign_evaluations == 2);

    CHECK(position_vector({}, Point{1.0, 2.0}, ops).size() == 0);
    CHECK(orientation_vector({}, Point{1.0, 2.0}, 1e-9, ops).empty());
}

TEST_CASE("orientation_vector reports a point on a plane") {
    // x1 = 2 written as 1 - x1/2 = 0
    const std::vector<Plane> planes{{{0.0, 1.0}, false}, {{-0.5, 0.0}, false}};
    OpCounter ops;
    try {
        orientation_vector(planes, Point{2.0, 5.0}, 1e-9, ops);
        FAIL("expected IncidentPoint");
    } catch (const IncidentPoint& e) {
        CHECK(e.plane() == 1);
    }
}

TEST_CASE("orientation vector signs follow position vector signs") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(8);
        const std::size_t q = rng.below(12);
        std::vector<Plane> planes(q);
        for (Plane& p : planes) {
            p.alpha.resize(n);
            for (double& a : p.alpha) a = rng.uniform(-1, 1);
        }
        Point x;
        for (std::size_t i = 0; i < n; ++i) x.coords.push_back(rng.uniform(-5, 5));
        OpCounter ops;
        const PositionVector pv = position_vector(planes, x, ops);
        OrientationVector ov;
        try {
            ov = orientation_vector(planes, x, 1e-9, ops);
        } catch (const IncidentPoint&) {
            continue;
        }
        REQUIRE(ov.size() == q);
        for (std::size_t j = 0; j < q; ++j) CHECK(ov[j] == (pv.residuals[j] > 0 ? 1 : -1));
    }
}

TEST_CASE("position_vector costs exactly n*q multiplications per point") {
    Rng rng(11);
    const std::size_t n = 6, q = 9, count = 37;
    std::vector<Plane> planes(q, Plane{std::vector<double>(n, 0.25), false});
    OpCounter ops;
    for (std::size_t i = 0; i < count; ++i) {
        Point p;
        for (std::size_t k = 0; k < n; ++k) p.coords.push_back(rng.uniform());
        position_vector(planes, p, ops);
    }
    CHECK(ops.multiplications == count * n * q);
    CHECK(ops.additions == count * n * q);
}

TEST_CASE("fit through n midpoints solves the square system") {
    OpCounter ops;
    const std::vector<Point> mids{{2.0, 0.0}, {0.0, 2.0}};
    const Plane p = fit_plane_through(mids, 2, 1, ops);
    CHECK(p.alpha[0] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(p.alpha[1] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(p.saturated);
    CHECK(ops.multiplications > 0);
}

TEST_CASE("underdetermined fit satisfies its constraint") {
    OpCounter ops;
    const std::vector<Point> mids{{1.0, 1.0}};
    const Plane p = fit_plane_through(mids, 2, 99, ops);
    CHECK(std::abs(1.0 + p.alpha[0] + p.alpha[1]) < 1e-12);
    CHECK_FALSE(p.saturated);
    // Same seed, same plane.
    const Plane again = fit_plane_through(mids, 2, 99, ops);
    CHECK(again == p);
}

TEST_CASE("fit through midpoints collinear with the origin is inconsistent") {
    OpCounter ops;
    const std::vector<Point> mids{{1.0, 1.0}, {2.0, 2.0}};
    CHECK_THROWS_AS(fit_plane_through(mids, 2, 1, ops), InconsistentSystem);
    const std::vector<Point> origin{{0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(fit_plane_through(origin, 3, 1, ops), InconsistentSystem);
}

TEST_CASE("fit rejects bad batch sizes") {
    OpCounter ops;
    CHECK_THROWS_AS(fit_plane_through({}, 2, 1, ops), std::invalid_argument);
    const std::vector<Point> three{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(fit_plane_through(three, 2, 1, ops), std::invalid_argument);
}

TEST_CASE("rank-deficient but consistent systems get random free directions") {
    OpCounter ops;
    // Same midpoint twice in 3-D: rank 1, two free coefficients.
    const std::vector<Point> mids{{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}};
    const Plane p = fit_plane_through(mids, 3, 5, ops);
    CHECK(std::abs(residual(p.alpha, mids[0].coords)) < 1e-12);
    CHECK_FALSE(p.saturated);
}

TEST_CASE("fitted planes pass through their midpoints and split every segment") {
    Rng rng(2024);
    int fits = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        const std::size_t k = 1 + rng.below(n);
        std::vector<Point> a(k), b(k), mids(k);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                a[j].coords.push_back(rng.uniform(0, 10));
                b[j].coords.push_back(rng.uniform(0, 10));
            }
            mids[j] = midpoint(a[j], b[j]);
        }
        OpCounter ops;
        Plane p;
        try {
            p = fit_plane_through(mids, n, rng.next(), ops);
        } catch (const InconsistentSystem&) {
            continue;
        }
        ++fits;
        const double an = norm(p.alpha);
        for (std::size_t j = 0; j < k; ++j) {
            CHECK(std::abs(residual(p.alpha, mids[j].coords)) <= 1e-6 * (1 + an * norm(mids[j].coords)));
            const double ra = residual(p.alpha, a[j].coords);
            const double rb = residual(p.alpha, b[j].coords);
            // r(a) + r(b) = 2 r(m) = 0, so the endpoints sit on opposite sides.
            CHECK(std::abs(ra + rb) <= 1e-6 * (1 + std::abs(ra)));
            if (std::abs(ra) > 1e-6) CHECK((ra > 0) != (rb > 0));
        }
    }
    CHECK(fits > 250);
}

TEST_CASE("shift_midpoints") {
    const std::vector<Point> mids{{1.0, 1.0}};
    const std::vector<double> axis{1.0, 0.0};
    CHECK(shift_midpoints(mids, axis, 0.0) == mids);
    const auto moved = shift_midpoints(mids, axis, 0.5);
    CHECK(moved[0] == Point{1.5, 1.0});
    const std::vector<double> diag{3.0, 4.0};
    const auto d = shift_midpoints(mids, diag, 5.0);
    CHECK(d[0][0] == doctest::Approx(4.0));
    CHECK(d[0][1] == doctest::Approx(5.0));
    const std::vector<double> zero{0.0, 0.0};
    CHECK_THROWS_AS(shift_midpoints(mids, zero, 1.0), std::invalid_argument);
}

TEST_CASE("shift and refit moves the plane off an incident point") {
    // Line through (0.5, 2.5) and (2.5, 0.5) is x + y = 3 and passes through (1, 2).
    OpCounter ops;
    const std::vector<Point> mids{{0.5, 2.5}, {2.5, 0.5}};
    const Point offender{1.0, 2.0};
    const Plane first = fit_plane_through(mids, 2, 1, ops);
    CHECK(sign_of(evaluate_residual(first, offender, ops), 1e-9) == Sign::incident);
    const auto shifted = shift_midpoints(mids, first.alpha, 1e-3);
    const Plane second = fit_plane_through(shifted, 2, 1, ops);
    CHECK(std::abs(evaluate_residual(second, offender, ops)) > 1e-9);
}

}  // TEST_SUITE
