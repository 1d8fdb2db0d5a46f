#include "hyperstore/repository.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "hyperstore/errors.hpp"

namespace hyperstore {

std::optional<std::uint64_t> IntegerMapping::capacity() const noexcept {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (c > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
        c *= base;
    }
    return c;
}

void IntegerMapping::validate() const {
    if (n == 0) throw std::invalid_argument("mapping needs at least one digit");
    if (base < 2) throw std::invalid_argument("mapping base must be at least 2");
}

Point map_to_point(std::uint64_t v, const IntegerMapping& mapping) {
    mapping.validate();
    if (!mapping.representable(v))
        throw Overflow(std::to_string(v) + " has more than " + std::to_string(mapping.n) +
                       " base-" + std::to_string(mapping.base) + " digits");
    Point p;
    p.coords.resize(mapping.n, 0.0);
    for (std::size_t i = 0; i < mapping.n && v != 0; ++i) {
        p[i] = static_cast<double>(v % mapping.base);
        v /= mapping.base;
    }
    return p;
}

std::uint64_t point_to_integer(const Point& p, const IntegerMapping& mapping) {
    mapping.validate();
    if (p.dimension() != mapping.n)
        throw DimensionMismatch("point has dimension " + std::to_string(p.dimension()) +
                                ", mapping expects " + std::to_string(mapping.n));
    unsigned __int128 value = 0;
    unsigned __int128 weight = 1;
    constexpr unsigned __int128 cap = static_cast<unsigned __int128>(1) << 64;
    for (std::size_t i = 0; i < p.dimension(); ++i) {
        const double c = p[i];
        if (!(c >= 0.0) || c >= mapping.base || std::floor(c) != c)
            throw NotADigitPoint("coordinate " + std::to_string(i) + " is not a base-" +
                                 std::to_string(mapping.base) + " digit");
        if (c != 0.0) {
            if (weight >= cap) throw Overflow("digit point exceeds 64-bit range");
            value += weight * static_cast<unsigned __int128>(c);
            if (value >= cap) throw Overflow("digit point exceeds 64-bit range");
        }
        if (weight < cap) weight *= mapping.base;
    }
    return static_cast<std::uint64_t>(value);
}

Repository::Repository(IntegerMapping mapping, SeparatorConfig config)
    : mapping_(mapping), initial_dimension_(mapping.n), state_(mapping.n, config) {
    mapping_.validate();
}

Repository Repository::build(std::span<const std::uint64_t> values, std::size_t n,
                             const SeparatorConfig& config, unsigned base) {
    Repository repo(IntegerMapping{n, base}, config);
    std::vector<KeyedPoint> points;
    points.reserve(values.size());
    for (std::uint64_t v : values) points.push_back(KeyedPoint{v, map_to_point(v, repo.mapping_)});
    extend(repo.state_, std::move(points));
    return repo;
}

QueryResult Repository::query(std::uint64_t v) const {
    const Point p = map_to_point(v, mapping_);
    QueryResult res;
    const PositionVector pv = position_vector(state_.planes(), p, res.ops);
    OrientationVector ov;
    bool incident = false;
    for (double r : pv.residuals) {
        ++res.ops.sign_evaluations;
        const Sign s = sign_of(r, state_.config().epsilon);
        if (s == Sign::incident) incident = true;
        ov.push_back(s == Sign::positive);
    }
    // No stored point lies on a plane, so an incident query has no owner.
    if (incident) {
        res.reason = AbsentReason::new_quadrant;
        return res;
    }
    const auto id = state_.find(ov, res.ops);
    if (!id) {
        res.reason = AbsentReason::new_quadrant;
        return res;
    }
    const std::uint64_t owner = state_.members()[*id].key;
    res.quadrant_owner = owner;
    if (owner == v) res.found = true;
    else res.reason = AbsentReason::coordinate_mismatch;
    return res;
}

InsertReport Repository::insert(std::span<const std::uint64_t> values) {
    for (std::uint64_t v : values)
        if (!mapping_.representable(v))
            throw Overflow(std::to_string(v) + " does not fit in " + std::to_string(mapping_.n) + " digits");

    InsertReport report;
    report.planes_before = plane_count();
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(size() + values.size());
    for (const Member& m : state_.members()) seen.insert(m.key);
    std::vector<KeyedPoint> fresh;
    for (std::uint64_t v : values) {
        if (!seen.insert(v).second) {
            report.duplicates.push_back(v);
            continue;
        }
        fresh.push_back(KeyedPoint{v, map_to_point(v, mapping_)});
    }
    report.inserted = fresh.size();
    extend(state_, std::move(fresh));
    report.planes_after = plane_count();
    return report;
}

void Repository::grow_dimension(std::size_t new_dimension) {
    if (new_dimension < mapping_.n) throw std::invalid_argument("dimension can only grow");
    state_.grow_dimension(new_dimension);
    mapping_.n = new_dimension;
}

std::vector<std::uint64_t> Repository::values() const {
    std::vector<std::uint64_t> out;
    out.reserve(size());
    for (const Member& m : state_.members()) out.push_back(m.key);
    return out;
}

}  // namespace hyperstore
