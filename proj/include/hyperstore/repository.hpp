#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "hyperstore/counters.hpp"
#include "hyperstore/geometry.hpp"
#include "hyperstore/separator.hpp"

namespace hyperstore {

/// Digit-reversal mapping: coordinate i holds the i-th least significant digit.
struct IntegerMapping {
    std::size_t n = 1;
    unsigned base = 10;

    /// base^n, or nullopt when every 64-bit value fits.
    std::optional<std::uint64_t> capacity() const noexcept;
    bool representable(std::uint64_t v) const noexcept {
        const auto cap = capacity();
        return !cap || v < *cap;
    }
    void validate() const;
    friend bool operator==(const IntegerMapping&, const IntegerMapping&) = default;
};

/// Throws Overflow when v >= base^n.
Point map_to_point(std::uint64_t v, const IntegerMapping& mapping);

/// Throws NotADigitPoint unless every coordinate is an integer in [0, base).
std::uint64_t point_to_integer(const Point& p, const IntegerMapping& mapping);

enum class AbsentReason { none, new_quadrant, coordinate_mismatch };

struct QueryResult {
    bool found = false;
    AbsentReason reason = AbsentReason::none;
    /// Stored value sharing the query's quadrant, if there is one.
    std::optional<std::uint64_t> quadrant_owner;
    OpCounter ops;
};

struct InsertReport {
    std::size_t inserted = 0;
    std::vector<std::uint64_t> duplicates;
    std::size_t planes_before = 0;
    std::size_t planes_after = 0;
    std::size_t planes_added() const noexcept { return planes_after - planes_before; }
};

/// Integer store addressed by orientation vector.
///
/// Build and insert need exclusive access; query is const and may run from
/// any number of threads between mutations.
class Repository {
public:
    static constexpr int format_version = 1;

    /// Empty repository of the given width.
    Repository(IntegerMapping mapping, SeparatorConfig config);

    /// Values must be distinct and representable.
    static Repository build(std::span<const std::uint64_t> values, std::size_t n,
                            const SeparatorConfig& config, unsigned base = 10);

    QueryResult query(std::uint64_t v) const;
    bool contains(std::uint64_t v) const { return query(v).found; }

    /// Adds new values, skipping ones already stored or repeated in the batch.
    /// Throws Overflow (before changing anything) if a value does not fit.
    InsertReport insert(std::span<const std::uint64_t> values);

    /// Zero-pads planes and points; all orientation vectors stay bit-identical.
    void grow_dimension(std::size_t new_dimension);

    void save(std::ostream& out) const;
    /// Throws FormatError with the offending line number.
    static Repository load(std::istream& in);
    /// Writes to a sibling temporary file and renames it into place.
    void save_file(const std::filesystem::path& path) const;
    static Repository load_file(const std::filesystem::path& path);

    const IntegerMapping& mapping() const noexcept { return mapping_; }
    std::size_t dimension() const noexcept { return mapping_.n; }
    std::size_t initial_dimension() const noexcept { return initial_dimension_; }
    const SeparationState& state() const noexcept { return state_; }
    std::size_t size() const noexcept { return state_.members().size(); }
    std::size_t plane_count() const noexcept { return state_.planes().size(); }
    std::vector<std::uint64_t> values() const;

private:
    Repository(IntegerMapping mapping, std::size_t initial_dimension, SeparationState state);

    IntegerMapping mapping_;
    std::size_t initial_dimension_;
    SeparationState state_;
};

}  // namespace hyperstore
