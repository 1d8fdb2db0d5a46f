#include <algorithm>
#include <deque>
#include <string>

#include "hyperstore/errors.hpp"
#include "hyperstore/random.hpp"
#include "hyperstore/separator.hpp"

namespace hyperstore {

namespace {

void require_distinct(const SeparationState& state, std::span<const KeyedPoint> points) {
    std::vector<const Point*> all;
    all.reserve(points.size() + state.members().size());
    for (const KeyedPoint& kp : points) {
        if (kp.point.dimension() != state.dimension())
            throw DimensionMismatch("point of dimension " + std::to_string(kp.point.dimension()) +
                                    " given to a " + std::to_string(state.dimension()) +
                                    "-dimensional separation");
        all.push_back(&kp.point);
    }
    for (const Member& m : state.members()) all.push_back(&m.point);
    std::sort(all.begin(), all.end(), [](const Point* a, const Point* b) { return *a < *b; });
    const auto dup = std::adjacent_find(all.begin(), all.end(),
                                        [](const Point* a, const Point* b) { return *a == *b; });
    if (dup != all.end()) throw DuplicatePoint("two points are identical and cannot be separated");
}

// Steps 2-7: draw from the pool until it is empty, parking recycled points
// until the next plane emission.
void feed(SeparationState& state, std::deque<KeyedPoint> pool) {
    std::vector<KeyedPoint> parked;
    auto release = [&] {
        for (KeyedPoint& kp : state.take_recycled()) pool.push_back(std::move(kp));
        for (KeyedPoint& kp : parked) pool.push_back(std::move(kp));
        parked.clear();
    };
    for (;;) {
        if (pool.empty()) {
            if (parked.empty()) {
                state.finalize();
                for (KeyedPoint& kp : state.take_recycled()) pool.push_back(std::move(kp));
                if (pool.empty()) return;
                continue;
            }
            state.emit_plane();
            release();
            continue;
        }
        KeyedPoint kp = std::move(pool.front());
        pool.pop_front();
        switch (state.offer(kp.key, kp.point)) {
            case OfferResult::recycled:
                parked.push_back(std::move(kp));
                break;
            case OfferResult::plane_emitted:
                release();
                break;
            case OfferResult::accepted:
            case OfferResult::pending:
                break;
        }
    }
}

}  // namespace

void extend(SeparationState& state, std::vector<KeyedPoint> points) {
    require_distinct(state, points);
    if (points.empty()) return;
    Rng rng(Rng::mix(state.config().seed, state.members().size(), points.size()));
    rng.shuffle(points.begin(), points.end());

    std::deque<KeyedPoint> pool;
    std::size_t first = 0;
    if (state.members().empty() && state.planes().empty() && state.chains().empty()) {
        first = std::min(points.size(), state.dimension() + 1);
        const SeparatorConfig config = state.config();
        state = SeparationState::init(std::span(points).first(first), state.dimension(), config);
    }
    for (std::size_t i = first; i < points.size(); ++i) pool.push_back(std::move(points[i]));
    feed(state, std::move(pool));
}

SeparationState run(std::span<const Point> points, std::size_t dimension,
                    const SeparatorConfig& config) {
    SeparationState state(dimension, config);
    std::vector<KeyedPoint> keyed;
    keyed.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) keyed.push_back(KeyedPoint{i, points[i]});
    extend(state, std::move(keyed));
    return state;
}

}  // namespace hyperstore
