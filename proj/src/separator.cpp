#include "hyperstore/separator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "hyperstore/errors.hpp"
#include "hyperstore/random.hpp"

namespace hyperstore {

namespace {

std::vector<double> random_unit(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    double len = 0.0;
    while (len == 0.0) {
        len = 0.0;
        for (double& x : v) {
            x = rng.gaussian();
            len += x * x;
        }
        len = std::sqrt(len);
    }
    for (double& x : v) x /= len;
    return v;
}

double distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::size_t ceil_log2(std::size_t x) {
    return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1));
}

void require_points(std::span<const KeyedPoint> points, std::size_t n) {
    for (const KeyedPoint& kp : points) {
        if (kp.point.dimension() != n)
            throw DimensionMismatch("point of dimension " + std::to_string(kp.point.dimension()) +
                                    " offered to a " + std::to_string(n) + "-dimensional state");
        for (double x : kp.point.coords)
            if (!std::isfinite(x)) throw std::invalid_argument("point has a non-finite coordinate");
    }
}

}  // namespace

void SeparatorConfig::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(delta0 > 0.0)) throw std::invalid_argument("delta0 must be positive");
    if (max_retries < 1) throw std::invalid_argument("max_retries must be at least 1");
}

struct SeparationState::FitOutcome {
    std::optional<Plane> plane;
    std::vector<double> member_residuals;
    std::vector<std::array<double, 3>> pending_residuals;
    std::vector<bool> chain_ok;
};

SeparationState::SeparationState(std::size_t dimension, SeparatorConfig config)
    : n_(dimension), config_(config) {
    if (n_ == 0) throw std::invalid_argument("dimension must be at least 1");
    config_.validate();
}

SeparationState SeparationState::init(std::span<const KeyedPoint> points0, std::size_t dimension,
                                      const SeparatorConfig& config) {
    SeparationState st(dimension, config);
    require_points(points0, dimension);
    const std::size_t count = points0.size();
    if (count == 0) return st;

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points0[a].point < points0[b].point; });
    for (std::size_t i = 1; i < count; ++i)
        if (points0[order[i]].point == points0[order[i - 1]].point)
            throw DuplicatePoint("two input points are identical and cannot be separated");

    const std::size_t n = dimension;
    const double eps = config.epsilon;
    const std::size_t min_planes = ceil_log2(std::max(count, n + 1));
    std::vector<OrientationVector> ovs(count);
    Rng rng(Rng::mix(config.seed, 0x696e6974ULL, count));

    for (;;) {
        // First pair still sharing a quadrant, if any.
        std::optional<std::pair<std::size_t, std::size_t>> clash;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return ovs[a] < ovs[b]; });
        for (std::size_t i = 1; i < count && !clash; ++i)
            if (ovs[order[i]] == ovs[order[i - 1]]) clash = std::pair{order[i - 1], order[i]};
        if (!clash && st.planes_.size() >= min_planes) break;

        bool placed = false;
        for (int attempt = 0; attempt < 256 && !placed; ++attempt) {
            Point center;
            std::vector<double> normal;
            if (clash) {
                const Point& a = points0[clash->first].point;
                const Point& b = points0[clash->second].point;
                center = midpoint(a, b);
                const double len = distance(a, b);
                normal = random_unit(rng, n);
                for (std::size_t i = 0; i < n; ++i) normal[i] = (b[i] - a[i]) / len + 0.5 * normal[i];
            } else if (count >= 2) {
                const auto ia = rng.below(count);
                auto ib = rng.below(count - 1);
                if (ib >= ia) ++ib;
                const Point& a = points0[ia].point;
                const Point& b = points0[ib].point;
                const double t = rng.uniform(0.25, 0.75);
                center = a;
                for (std::size_t i = 0; i < n; ++i) center[i] += t * (b[i] - a[i]);
                normal = random_unit(rng, n);
            } else {
                center = points0[0].point;
                const auto offset = random_unit(rng, n);
                for (std::size_t i = 0; i < n; ++i) center[i] += 0.5 * offset[i];
                normal = random_unit(rng, n);
            }
            double dot = 0.0, center_norm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                dot += normal[i] * center[i];
                center_norm += center[i] * center[i];
            }
            // The plane must not pass through the origin.
            if (std::abs(dot) <= 1e-9 * (std::sqrt(center_norm) + 1.0)) continue;
            Plane plane{std::vector<double>(n), true};
            for (std::size_t i = 0; i < n; ++i) plane.alpha[i] = -normal[i] / dot;

            std::vector<double> residuals(count);
            bool ok = true;
            for (std::size_t i = 0; i < count && ok; ++i) {
                residuals[i] = evaluate_residual(plane, points0[i].point, st.counters_.update);
                ++st.counters_.update.sign_evaluations;
                if (sign_of(residuals[i], eps) == Sign::incident) ok = false;
            }
            if (!ok) continue;
            if (clash && (residuals[clash->first] > 0) == (residuals[clash->second] > 0)) continue;
            for (std::size_t i = 0; i < count; ++i) ovs[i].push_back(residuals[i] > 0);
            st.planes_.push_back(std::move(plane));
            placed = true;
        }
        if (!placed) throw GeometryExhausted("could not place an initial separating plane");
    }

    for (std::size_t i = 0; i < count; ++i)
        st.add_member(points0[i].key, points0[i].point, std::move(ovs[i]));
    st.initial_planes_ = st.planes_.size();
    return st;
}

SeparationState SeparationState::restore(std::size_t dimension, SeparatorConfig config,
                                         std::vector<Plane> planes, std::size_t initial_planes,
                                         std::vector<KeyedPoint> members,
                                         const std::vector<OrientationVector>& expected_ovs,
                                         SeparatorCounters counters) {
    SeparationState st(dimension, config);
    if (initial_planes > planes.size())
        throw std::invalid_argument("initial plane count exceeds plane count");
    if (expected_ovs.size() != members.size())
        throw std::invalid_argument("one orientation vector is required per member");
    for (const Plane& p : planes)
        if (p.dimension() != dimension) throw std::invalid_argument("plane has wrong dimension");
    require_points(members, dimension);
    st.planes_ = std::move(planes);
    st.initial_planes_ = initial_planes;
    for (std::size_t i = 0; i < members.size(); ++i) {
        OpCounter scratch;
        OrientationVector ov;
        try {
            ov = orientation_vector(st.planes_, members[i].point, config.epsilon, scratch);
        } catch (const IncidentPoint& e) {
            throw std::invalid_argument("member " + std::to_string(members[i].key) +
                                        " lies on plane " + std::to_string(e.plane()));
        }
        if (ov != expected_ovs[i])
            throw std::invalid_argument("member " + std::to_string(members[i].key) +
                                        " has an orientation vector that does not match the planes");
        OpCounter ignored;
        if (st.find(ov, ignored))
            throw std::invalid_argument("member " + std::to_string(members[i].key) +
                                        " shares its orientation vector with another member");
        st.add_member(members[i].key, std::move(members[i].point), std::move(ov));
    }
    st.counters_ = counters;
    return st;
}

std::size_t SeparationState::add_member(std::uint64_t key, Point point, OrientationVector ov) {
    const std::size_t id = members_.size();
    const auto [it, inserted] = index_.emplace(ov, id);
    if (!inserted) throw std::logic_error("orientation vector already present in the index");
    members_.push_back(Member{key, std::move(point), std::move(ov)});
    return id;
}

void SeparationState::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const auto [it, inserted] = index_.emplace(members_[i].ov, i);
        if (!inserted) throw std::logic_error("members share an orientation vector");
    }
}

std::optional<std::size_t> SeparationState::find(const OrientationVector& ov, OpCounter& ops) const {
    const auto it = index_.find(CountedKey{ov, ops.bit_comparisons});
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<OrientationVector, std::size_t>> SeparationState::index_entries() const {
    return {index_.begin(), index_.end()};
}

PendingChain* SeparationState::chain_for(std::size_t anchor) {
    for (PendingChain& ch : chains_)
        if (ch.anchor == anchor) return &ch;
    return nullptr;
}

std::vector<KeyedPoint> SeparationState::take_recycled() {
    return std::exchange(recycled_, {});
}

void SeparationState::repair_incidence(std::size_t plane_index, const Point& p) {
    // Scaling alpha by (1 + eta) moves the plane parallel to itself. eta is
    // kept small enough that no stored or pending point changes side.
    const Plane& plane = planes_[plane_index];
    const double eps = config_.epsilon;
    OpCounter& ops = counters_.remedy;

    std::vector<const Point*> guarded;
    guarded.reserve(members_.size());
    for (const Member& m : members_) guarded.push_back(&m.point);
    for (const PendingChain& ch : chains_) {
        guarded.push_back(&ch.b.point);
        if (ch.c) guarded.push_back(&ch.c->point);
        if (ch.d) guarded.push_back(&ch.d->point);
    }
    std::vector<double> before(guarded.size());
    double eta = 1e-6;
    for (std::size_t i = 0; i < guarded.size(); ++i) {
        before[i] = evaluate_residual(plane, *guarded[i], ops);
        const double slope = std::abs(before[i] - 1.0);
        if (slope > 0.0) eta = std::min(eta, 0.5 * (std::abs(before[i]) - eps) / slope);
    }
    const double rp = evaluate_residual(plane, p, ops);
    if (!(std::abs(rp + eta * (rp - 1.0)) > 16.0 * eps))
        throw IncidentPoint("point lies on plane " + std::to_string(plane_index) +
                                " and the plane cannot be moved off it",
                            plane_index);

    Plane trial = plane;
    for (double& a : trial.alpha) a *= 1.0 + eta;
    for (std::size_t i = 0; i < guarded.size(); ++i) {
        const double after = evaluate_residual(trial, *guarded[i], ops);
        ++ops.sign_evaluations;
        if (sign_of(after, eps) == Sign::incident || (after > 0) != (before[i] > 0))
            throw IncidentPoint("moving plane " + std::to_string(plane_index) +
                                    " off an incident point would disturb stored points",
                                plane_index);
    }
    planes_[plane_index] = std::move(trial);
}

OfferResult SeparationState::offer(std::uint64_t key, const Point& p) {
    if (p.dimension() != n_)
        throw DimensionMismatch("offered point has dimension " + std::to_string(p.dimension()) +
                                ", state has " + std::to_string(n_));
    if (config_.record_offers) offer_log_.push_back(planes_.size());

    PositionVector pv = position_vector(planes_, p, counters_.offer);
    OrientationVector ov;
    for (std::size_t j = 0; j < pv.size(); ++j) {
        ++counters_.offer.sign_evaluations;
        Sign s = sign_of(pv.residuals[j], config_.epsilon);
        if (s == Sign::incident) {
            repair_incidence(j, p);
            s = sign_of(evaluate_residual(planes_[j], p, counters_.remedy), config_.epsilon);
            ++counters_.remedy.sign_evaluations;
            if (s == Sign::incident) throw IncidentPoint("point remains on plane " + std::to_string(j), j);
        }
        ov.push_back(s == Sign::positive);
    }

    const auto anchor = find(ov, counters_.offer);
    if (!anchor) {
        add_member(key, p, std::move(ov));
        return OfferResult::accepted;
    }

    PendingPoint pending{key, p, std::move(ov)};
    if (PendingChain* ch = chain_for(*anchor)) {
        if (!ch->c) ch->c = std::move(pending);
        else if (!ch->d) ch->d = std::move(pending);
        else return OfferResult::recycled;
        return OfferResult::pending;
    }
    Point mid = midpoint(members_[*anchor].point, pending.point);
    chains_.push_back(PendingChain{*anchor, std::move(pending), std::nullopt, std::nullopt, std::move(mid)});
    if (chains_.size() < n_) return OfferResult::pending;
    while (chains_.size() >= n_) emit_plane();
    return OfferResult::plane_emitted;
}

void SeparationState::precheck_pending_quadrants() {
    for (std::size_t i = 0; i < chains_.size(); ++i) {
        for (std::size_t k = i + 1; k < chains_.size();) {
            if (chains_[i].b.ov != chains_[k].b.ov) {
                ++k;
                continue;
            }
            PendingChain moved = std::move(chains_[k]);
            chains_.erase(chains_.begin() + static_cast<std::ptrdiff_t>(k));
            PendingChain& keep = chains_[i];
            if (!keep.c) keep.c = std::move(moved.b);
            else if (!keep.d) keep.d = std::move(moved.b);
            else recycled_.push_back(KeyedPoint{moved.b.key, std::move(moved.b.point)});
            for (auto* extra : {&moved.c, &moved.d})
                if (*extra) recycled_.push_back(KeyedPoint{(*extra)->key, std::move((*extra)->point)});
        }
    }
}

SeparationState::FitOutcome SeparationState::try_fit(std::span<const std::size_t> active,
                                                      std::size_t& attempts) {
    const double eps = config_.epsilon;
    std::vector<Point> mids;
    double mean_length = 0.0;
    for (std::size_t c : active) {
        mids.push_back(chains_[c].midpoint_ab);
        mean_length += distance(members_[chains_[c].anchor].point, chains_[c].b.point);
    }
    mean_length /= static_cast<double>(active.size());
    const double delta = config_.delta0 * mean_length;

    FitOutcome out;
    out.chain_ok.assign(active.size(), false);
    std::vector<double> normal;
    for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
        const std::uint64_t seed = Rng::mix(config_.seed, planes_.size(), attempts++);
        std::vector<Point> shifted;
        if (attempt == 0) {
            shifted = mids;
        } else {
            if (normal.empty()) {
                Rng rng(seed ^ 0x5bd1e995ULL);
                normal = random_unit(rng, n_);
            }
            double step = std::ldexp(delta, static_cast<int>(attempt) - 1);
            if (attempt % 2 == 0) step = -step;
            shifted = shift_midpoints(mids, normal, step);
        }

        Plane plane;
        try {
            plane = fit_plane_through(shifted, n_, seed, counters_.solve);
        } catch (const InconsistentSystem&) {
            normal.clear();
            continue;
        }
        normal = plane.alpha;

        bool ok = true;
        OpCounter& ops = counters_.update;
        out.member_residuals.assign(members_.size(), 0.0);
        for (std::size_t i = 0; i < members_.size(); ++i) {
            out.member_residuals[i] = evaluate_residual(plane, members_[i].point, ops);
            ++ops.sign_evaluations;
            if (sign_of(out.member_residuals[i], eps) == Sign::incident) ok = false;
        }
        out.pending_residuals.assign(chains_.size(), {0.0, 0.0, 0.0});
        for (std::size_t c = 0; c < chains_.size(); ++c) {
            const PendingChain& ch = chains_[c];
            const PendingPoint* pts[3] = {&ch.b, ch.c ? &*ch.c : nullptr, ch.d ? &*ch.d : nullptr};
            for (std::size_t s = 0; s < 3; ++s) {
                if (!pts[s]) continue;
                out.pending_residuals[c][s] = evaluate_residual(plane, pts[s]->point, ops);
                ++ops.sign_evaluations;
                if (sign_of(out.pending_residuals[c][s], eps) == Sign::incident) ok = false;
            }
        }
        for (std::size_t pos = 0; pos < active.size(); ++pos) {
            const std::size_t c = active[pos];
            const double ra = out.member_residuals[chains_[c].anchor];
            const double rb = out.pending_residuals[c][0];
            out.chain_ok[pos] = sign_of(ra, eps) != Sign::incident &&
                                sign_of(rb, eps) != Sign::incident && (ra > 0) != (rb > 0);
            if (!out.chain_ok[pos]) ok = false;
        }
        if (ok) {
            out.plane = std::move(plane);
            return out;
        }
    }
    return out;
}

void SeparationState::commit_plane(Plane plane, const FitOutcome& outcome,
                                   std::span<const std::size_t> active, PlaneReport& report) {
    planes_.push_back(std::move(plane));
    const std::size_t last = planes_.size() - 1;
    for (std::size_t i = 0; i < members_.size(); ++i)
        members_[i].ov.push_back(outcome.member_residuals[i] > 0);
    for (std::size_t c = 0; c < chains_.size(); ++c) {
        PendingChain& ch = chains_[c];
        ch.b.ov.push_back(outcome.pending_residuals[c][0] > 0);
        if (ch.c) ch.c->ov.push_back(outcome.pending_residuals[c][1] > 0);
        if (ch.d) ch.d->ov.push_back(outcome.pending_residuals[c][2] > 0);
    }
    rebuild_index();

    // Every pending point now sits either in its anchor's quadrant or in the
    // fresh quadrant across the new plane. The first point across becomes a
    // member; the rest queue behind whichever point owns their quadrant.
    std::vector<bool> is_active(chains_.size(), false);
    for (std::size_t c : active) is_active[c] = true;
    auto make_chain = [&](std::size_t anchor, std::vector<PendingPoint>& pts, std::size_t from) {
        PendingChain ch{anchor, std::move(pts[from]), std::nullopt, std::nullopt, {}};
        if (pts.size() > from + 1) ch.c = std::move(pts[from + 1]);
        if (pts.size() > from + 2) ch.d = std::move(pts[from + 2]);
        ch.midpoint_ab = midpoint(members_[anchor].point, ch.b.point);
        return ch;
    };

    std::vector<PendingChain> waiting, produced;
    for (std::size_t c = 0; c < chains_.size(); ++c) {
        PendingChain& ch = chains_[c];
        const int anchor_side = members_[ch.anchor].ov[last];
        std::vector<PendingPoint> same, across;
        (ch.b.ov[last] == anchor_side ? same : across).push_back(std::move(ch.b));
        for (auto* slot : {&ch.c, &ch.d})
            if (*slot) ((*slot)->ov[last] == anchor_side ? same : across).push_back(std::move(**slot));

        auto& target = is_active[c] ? produced : waiting;
        if (!across.empty()) {
            const std::uint64_t key = across[0].key;
            const std::size_t id = add_member(key, std::move(across[0].point), std::move(across[0].ov));
            ++report.promoted;
            if (across.size() > 1) target.push_back(make_chain(id, across, 1));
        }
        if (!same.empty()) target.push_back(make_chain(ch.anchor, same, 0));
    }
    chains_ = std::move(waiting);
    for (PendingChain& ch : produced) chains_.push_back(std::move(ch));

    report.saturated = planes_.back().saturated;
    report.counter_after = chains_.size();
}

std::optional<PlaneReport> SeparationState::emit_plane() {
    precheck_pending_quadrants();
    if (chains_.empty()) return std::nullopt;

    std::vector<std::size_t> active(std::min(chains_.size(), n_));
    std::iota(active.begin(), active.end(), std::size_t{0});
    PlaneReport report;
    report.plane_index = planes_.size();
    std::size_t attempts = 0;
    while (!active.empty()) {
        FitOutcome outcome = try_fit(active, attempts);
        if (outcome.plane) {
            report.chains_fitted = active.size();
            report.attempts = attempts;
            commit_plane(std::move(*outcome.plane), outcome, active, report);
            return report;
        }
        // Keep the chains the last fit did separate; failing that, shrink the
        // batch from the back until a single chain is tried on its own.
        std::vector<std::size_t> keep;
        for (std::size_t pos = 0; pos < active.size(); ++pos)
            if (outcome.chain_ok[pos]) keep.push_back(active[pos]);
        if (keep.empty() || keep.size() == active.size()) {
            keep = active;
            keep.pop_back();
        }
        report.chains_deferred += active.size() - keep.size();
        active = std::move(keep);
    }
    throw GeometryExhausted("no pending chain could be separated after " + std::to_string(attempts) +
                            " fitting attempts");
}

void SeparationState::finalize() {
    while (!chains_.empty()) emit_plane();
}

void SeparationState::grow_dimension(std::size_t new_dimension) {
    if (new_dimension < n_) throw std::invalid_argument("dimension can only grow");
    if (new_dimension == n_) return;
    auto pad = [&](std::vector<double>& v) { v.resize(new_dimension, 0.0); };
    for (Plane& p : planes_) pad(p.alpha);
    for (Member& m : members_) pad(m.point.coords);
    for (PendingChain& ch : chains_) {
        pad(ch.b.point.coords);
        if (ch.c) pad(ch.c->point.coords);
        if (ch.d) pad(ch.d->point.coords);
        pad(ch.midpoint_ab.coords);
    }
    for (KeyedPoint& kp : recycled_) pad(kp.point.coords);
    n_ = new_dimension;
}

}  // namespace hyperstore
