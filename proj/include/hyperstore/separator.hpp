#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hyperstore/counters.hpp"
#include "hyperstore/geometry.hpp"
#include "hyperstore/orientation_vector.hpp"

namespace hyperstore {

struct SeparatorConfig {
    std::uint64_t seed = 1;
    /// Incidence tolerance on residuals.
    double epsilon = default_epsilon;
    /// Initial midpoint shift, as a fraction of the batch's mean segment length.
    double delta0 = 1e-4;
    /// Shift-and-refit attempts after the first fit; delta doubles each time.
    std::size_t max_retries = 8;
    /// Keep the plane count seen by every offer (see SeparationState::offer_log).
    bool record_offers = false;

    /// Throws std::invalid_argument unless epsilon > 0, delta0 > 0 and max_retries >= 1.
    void validate() const;
};

struct KeyedPoint {
    std::uint64_t key;
    Point point;
};

/// A point of S: separated from every other member.
struct Member {
    std::uint64_t key;
    Point point;
    OrientationVector ov;
};

/// A point of T: shares its anchor's quadrant.
struct PendingPoint {
    std::uint64_t key;
    Point point;
    OrientationVector ov;
};

/// An anchor in S with one to three pending neighbours.
struct PendingChain {
    std::size_t anchor;  // index into members
    PendingPoint b;
    std::optional<PendingPoint> c;
    std::optional<PendingPoint> d;
    Point midpoint_ab;
};

enum class OfferResult { accepted, pending, recycled, plane_emitted };

struct PlaneReport {
    std::size_t plane_index = 0;
    std::size_t chains_fitted = 0;
    /// Chains taken out of the fit because no shift could separate them.
    std::size_t chains_deferred = 0;
    std::size_t promoted = 0;
    std::size_t counter_after = 0;
    std::size_t attempts = 0;
    bool saturated = false;
};

/// Live state of the incremental separation.
///
/// Invariants between calls: members carry pairwise distinct orientation
/// vectors of length q = planes().size(); the index maps exactly those vectors
/// to their members; every pending point shares its anchor's vector; fewer
/// than n chains are pending; no member or pending point is within epsilon of
/// any plane.
class SeparationState {
public:
    SeparationState(std::size_t dimension, SeparatorConfig config);

    /// Seeds the state from points0 with random planes, added one at a time
    /// until every point has its own non-incident orientation vector and at
    /// least ceil(log2(max(N0, n + 1))) planes exist.
    static SeparationState init(std::span<const KeyedPoint> points0, std::size_t dimension,
                                const SeparatorConfig& config);

    /// Rebuilds a frozen state from persisted planes and members. Orientation
    /// vectors are recomputed and checked; throws std::invalid_argument on any
    /// inconsistency.
    static SeparationState restore(std::size_t dimension, SeparatorConfig config,
                                   std::vector<Plane> planes, std::size_t initial_planes,
                                   std::vector<KeyedPoint> members,
                                   const std::vector<OrientationVector>& expected_ovs,
                                   SeparatorCounters counters);

    /// Places one candidate point. The caller guarantees it is not
    /// coordinate-identical to a member or pending point.
    OfferResult offer(std::uint64_t key, const Point& p);

    /// Fits one plane through the midpoints of up to n pending chains and
    /// moves the separated points into S. Returns nullopt when nothing is
    /// pending. Throws GeometryExhausted when no chain can be separated.
    std::optional<PlaneReport> emit_plane();

    /// Emits planes until nothing is pending.
    void finalize();

    /// Points pushed back to the pool by plane emission bookkeeping.
    std::vector<KeyedPoint> take_recycled();

    /// Index of the member with this orientation vector; bit comparisons are
    /// added to ops. Safe to call concurrently on a frozen state.
    std::optional<std::size_t> find(const OrientationVector& ov, OpCounter& ops) const;

    /// Zero-pads every plane and point to the larger dimension.
    void grow_dimension(std::size_t new_dimension);

    std::size_t dimension() const noexcept { return n_; }
    const SeparatorConfig& config() const noexcept { return config_; }
    const std::vector<Plane>& planes() const noexcept { return planes_; }
    const std::vector<Member>& members() const noexcept { return members_; }
    const std::vector<PendingChain>& chains() const noexcept { return chains_; }
    std::size_t counter() const noexcept { return chains_.size(); }
    std::size_t initial_planes() const noexcept { return initial_planes_; }
    std::size_t emitted_planes() const noexcept { return planes_.size() - initial_planes_; }
    const SeparatorCounters& counters() const noexcept { return counters_; }
    /// Plane count at each offer, in offer order (only with record_offers).
    const std::vector<std::size_t>& offer_log() const noexcept { return offer_log_; }

    /// Ordered (orientation vector -> member) view of the index.
    std::vector<std::pair<OrientationVector, std::size_t>> index_entries() const;

private:
    struct CountedKey {
        const OrientationVector& ov;
        std::uint64_t& bits;
    };
    struct OvLess {
        using is_transparent = void;
        bool operator()(const OrientationVector& a, const OrientationVector& b) const noexcept {
            return a < b;
        }
        bool operator()(const CountedKey& a, const OrientationVector& b) const noexcept {
            return OrientationVector::compare(a.ov, b, a.bits) < 0;
        }
        bool operator()(const OrientationVector& a, const CountedKey& b) const noexcept {
            return OrientationVector::compare(a, b.ov, b.bits) < 0;
        }
    };

    struct FitOutcome;

    std::size_t add_member(std::uint64_t key, Point point, OrientationVector ov);
    void rebuild_index();
    void repair_incidence(std::size_t plane, const Point& p);
    void precheck_pending_quadrants();
    FitOutcome try_fit(std::span<const std::size_t> active, std::size_t& attempts);
    void commit_plane(Plane plane, const FitOutcome& outcome, std::span<const std::size_t> active,
                      PlaneReport& report);
    PendingChain* chain_for(std::size_t anchor);

    std::size_t n_;
    SeparatorConfig config_;
    std::vector<Plane> planes_;
    std::vector<Member> members_;
    std::vector<PendingChain> chains_;
    std::map<OrientationVector, std::size_t, OvLess> index_;
    std::vector<KeyedPoint> recycled_;
    SeparatorCounters counters_;
    std::size_t initial_planes_ = 0;
    std::vector<std::size_t> offer_log_;
};

/// Separates all points (keys are input positions). Shuffles with the seed,
/// seeds the state from the first n + 1 points, offers the rest, re-offers
/// recycled points after the next plane emission, and finalizes.
/// Throws DuplicatePoint, DimensionMismatch, GeometryExhausted.
SeparationState run(std::span<const Point> points, std::size_t dimension,
                    const SeparatorConfig& config);

/// Continues an existing state with more points. Existing orientation vectors
/// are only ever extended. A state with no members is seeded by init first.
void extend(SeparationState& state, std::vector<KeyedPoint> points);

}  // namespace hyperstore
