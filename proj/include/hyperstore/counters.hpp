#pragma once

#include <cstdint>

namespace hyperstore {

/// Raw operation tallies. Owned by the caller and passed by reference.
struct OpCounter {
    std::uint64_t multiplications = 0;
    std::uint64_t additions = 0;
    std::uint64_t sign_evaluations = 0;
    std::uint64_t bit_comparisons = 0;

    OpCounter& operator+=(const OpCounter& o) noexcept {
        multiplications += o.multiplications;
        additions += o.additions;
        sign_evaluations += o.sign_evaluations;
        bit_comparisons += o.bit_comparisons;
        return *this;
    }
    friend OpCounter operator+(OpCounter a, const OpCounter& b) noexcept { return a += b; }
    friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

/// Build-time instrumentation, split by where the work happened.
struct SeparatorCounters {
    OpCounter offer;   // orientation vectors of offered points + index lookups
    OpCounter update;  // evaluating new planes over stored and pending points
    OpCounter solve;   // elimination work while fitting planes
    OpCounter remedy;  // incidence repairs

    OpCounter total() const noexcept { return offer + update + solve + remedy; }
    friend bool operator==(const SeparatorCounters&, const SeparatorCounters&) = default;
};

}  // namespace hyperstore
