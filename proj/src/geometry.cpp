#include "hyperstore/geometry.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hyperstore/errors.hpp"
#include "hyperstore/random.hpp"

namespace hyperstore {

namespace {

void require_dimension(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got)
        throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(expected) +
                                ", got " + std::to_string(got));
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

Point midpoint(const Point& a, const Point& b) {
    require_dimension(a.dimension(), b.dimension(), "midpoint");
    Point m;
    m.coords.resize(a.dimension());
    for (std::size_t i = 0; i < a.dimension(); ++i) m[i] = 0.5 * (a[i] + b[i]);
    return m;
}

double evaluate_residual(const Plane& plane, const Point& p, OpCounter& ops) {
    require_dimension(plane.dimension(), p.dimension(), "evaluate_residual");
    // Plain left-to-right sum: appending zero coefficients must leave the
    // result bit-identical.
    double r = 1.0;
    for (std::size_t j = 0; j < p.dimension(); ++j) r += plane.alpha[j] * p[j];
    ops.multiplications += p.dimension();
    ops.additions += p.dimension();
    return r;
}

Sign sign_of(double r, double epsilon) noexcept {
    if (r > epsilon) return Sign::positive;
    if (r < -epsilon) return Sign::negative;
    return Sign::incident;
}

PositionVector position_vector(std::span<const Plane> planes, const Point& p, OpCounter& ops) {
    PositionVector pv;
    pv.residuals.reserve(planes.size());
    for (const Plane& plane : planes) pv.residuals.push_back(evaluate_residual(plane, p, ops));
    return pv;
}

OrientationVector orientation_vector(std::span<const Plane> planes, const Point& p,
                                     double epsilon, OpCounter& ops) {
    const PositionVector pv = position_vector(planes, p, ops);
    OrientationVector ov;
    for (std::size_t j = 0; j < pv.size(); ++j) {
        ++ops.sign_evaluations;
        const Sign s = sign_of(pv.residuals[j], epsilon);
        if (s == Sign::incident)
            throw IncidentPoint("point lies on plane " + std::to_string(j), j);
        ov.push_back(s == Sign::positive);
    }
    return ov;
}

Plane fit_plane_through(std::span<const Point> midpoints, std::size_t dimension,
                        std::uint64_t rng_seed, OpCounter& ops) {
    const std::size_t k = midpoints.size();
    const std::size_t n = dimension;
    if (k == 0 || k > n)
        throw std::invalid_argument("fit_plane_through: need between 1 and n midpoints, got " +
                                    std::to_string(k));
    for (const Point& m : midpoints) require_dimension(n, m.dimension(), "fit_plane_through");

    // Row-major k x n system  M alpha = -1.
    std::vector<double> a(k * n);
    std::vector<double> rhs(k, -1.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = midpoints[i][j];
    std::vector<std::size_t> col(n);
    std::iota(col.begin(), col.end(), std::size_t{0});
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + col[j]]; };

    std::size_t rank = 0;
    double largest_pivot = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        std::size_t pi = r, pj = r;
        double best = 0.0;
        for (std::size_t i = r; i < k; ++i)
            for (std::size_t j = r; j < n; ++j)
                if (std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    pi = i;
                    pj = j;
                }
        largest_pivot = std::max(largest_pivot, best);
        if (best == 0.0 || best <= 1e-10 * largest_pivot) break;
        if (pi != r) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[r * n + j], a[pi * n + j]);
            std::swap(rhs[r], rhs[pi]);
        }
        std::swap(col[r], col[pj]);
        const double pivot = at(r, r);
        for (std::size_t i = r + 1; i < k; ++i) {
            const double f = at(i, r) / pivot;
            ++ops.multiplications;
            at(i, r) = 0.0;
            for (std::size_t j = r + 1; j < n; ++j) at(i, j) -= f * at(r, j);
            rhs[i] -= f * rhs[r];
            ops.multiplications += n - r;
            ops.additions += n - r;
        }
        ++rank;
    }

    for (std::size_t i = rank; i < k; ++i)
        if (std::abs(rhs[i]) > 1e-8)
            throw InconsistentSystem("fit_plane_through: midpoints admit no plane with unit constant term");

    Rng rng(rng_seed);
    std::vector<double> x(n, 0.0);
    for (std::size_t j = rank; j < n; ++j) x[col[j]] = rng.uniform(-1.0, 1.0);
    for (std::size_t r = rank; r-- > 0;) {
        double s = rhs[r];
        for (std::size_t j = r + 1; j < n; ++j) s -= at(r, j) * x[col[j]];
        x[col[r]] = s / at(r, r);
        ops.multiplications += n - r;
        ops.additions += n - r - 1;
    }

    Plane plane{std::move(x), rank == n};
    const double alpha_norm = norm(plane.alpha);
    for (const Point& m : midpoints) {
        double r = 1.0;
        for (std::size_t j = 0; j < n; ++j) r += plane.alpha[j] * m[j];
        if (!std::isfinite(r) || std::abs(r) > 1e-6 * (1.0 + alpha_norm * norm(m.coords)))
            throw InconsistentSystem("fit_plane_through: solution fails to pass through the midpoints");
    }
    return plane;
}

std::vector<Point> shift_midpoints(std::span<const Point> midpoints, std::span<const double> normal,
                                   double delta) {
    const double len = norm(normal);
    if (!(len > 0.0)) throw std::invalid_argument("shift_midpoints: normal must be nonzero");
    std::vector<Point> out(midpoints.begin(), midpoints.end());
    for (Point& m : out) {
        require_dimension(normal.size(), m.dimension(), "shift_midpoints");
        for (std::size_t i = 0; i < m.dimension(); ++i) m[i] += delta * normal[i] / len;
    }
    return out;
}

}  // namespace hyperstore
