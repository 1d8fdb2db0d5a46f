#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperstore/counters.hpp"
#include "hyperstore/orientation_vector.hpp"

namespace hyperstore {

/// A location in n-dimensional X-space.
struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    Point(std::initializer_list<double> c) : coords(c) {}

    std::size_t dimension() const noexcept { return coords.size(); }
    double operator[](std::size_t i) const noexcept { return coords[i]; }
    double& operator[](std::size_t i) noexcept { return coords[i]; }

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

/// Hyperplane 1 + alpha.x = 0. The constant term is fixed at 1.
struct Plane {
    std::vector<double> alpha;
    /// Constrained through n points (fully determined by them).
    bool saturated = false;

    std::size_t dimension() const noexcept { return alpha.size(); }
    friend bool operator==(const Plane&, const Plane&) = default;
};

/// Raw residuals r_j = 1 + alpha_j.p, one per plane.
struct PositionVector {
    std::vector<double> residuals;
    std::size_t size() const noexcept { return residuals.size(); }
};

enum class Sign : std::int8_t { negative = -1, incident = 0, positive = 1 };

inline constexpr double default_epsilon = 1e-9;

Point midpoint(const Point& a, const Point& b);

/// 1 + sum alpha[j]*p[j]. Counts n multiplications and n additions.
double evaluate_residual(const Plane& plane, const Point& p, OpCounter& ops);

Sign sign_of(double r, double epsilon) noexcept;

/// Residuals against every plane; exactly n*q multiplications and additions.
PositionVector position_vector(std::span<const Plane> planes, const Point& p, OpCounter& ops);

/// Signs of position_vector(planes, p). Throws IncidentPoint when any
/// component is within epsilon of zero.
OrientationVector orientation_vector(std::span<const Plane> planes, const Point& p,
                                     double epsilon, OpCounter& ops);

/// Plane through up to n midpoints: solves 1 + alpha.m_j = 0 for all j.
///
/// Uses elimination with full pivoting; columns left without a pivot (k < n or
/// a rank-deficient system) receive seeded uniform values in [-1, 1] before
/// back substitution. The result is marked saturated iff the constraints had
/// rank n. Throws InconsistentSystem when no such plane exists (for instance
/// when the midpoints force a plane through the origin).
Plane fit_plane_through(std::span<const Point> midpoints, std::size_t dimension,
                        std::uint64_t rng_seed, OpCounter& ops);

/// Every midpoint translated by delta * normal / |normal|.
std::vector<Point> shift_midpoints(std::span<const Point> midpoints,
                                   std::span<const double> normal, double delta);

}  // namespace hyperstore
