#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyperstore {

/// Packed sign sequence, one component per plane.
///
/// Component j is stored at bit (63 - j % 64) of word j / 64, with +1 encoded
/// as 1 and -1 as 0. Comparing the words as unsigned integers therefore gives
/// lexicographic ("dictionary") order over the components. Unused trailing
/// bits are always zero.
class OrientationVector {
public:
    OrientationVector() = default;

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    /// Component j as +1 or -1.
    int operator[](std::size_t j) const noexcept {
        return (words_[j / 64] >> (63 - j % 64)) & 1U ? 1 : -1;
    }

    void push_back(bool positive);
    void push_back_sign(int sign) { push_back(sign > 0); }

    /// First `count` components.
    OrientationVector prefix(std::size_t count) const;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    /// Lexicographic three-way comparison that also reports how many
    /// components were inspected before the first difference (or all of them).
    static std::strong_ordering compare(const OrientationVector& a, const OrientationVector& b,
                                        std::uint64_t& bits_inspected) noexcept;

    friend std::strong_ordering operator<=>(const OrientationVector& a,
                                            const OrientationVector& b) noexcept {
        std::uint64_t ignored = 0;
        return compare(a, b, ignored);
    }
    friend bool operator==(const OrientationVector& a, const OrientationVector& b) noexcept {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    /// Hex text of the packed components, most significant nibble first;
    /// "-" for the empty vector.
    std::string to_hex() const;
    /// Inverse of to_hex; throws std::invalid_argument on malformed text.
    static OrientationVector from_hex(std::string_view hex, std::size_t size);

    /// "+-+" rendering.
    std::string to_string() const;

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

}  // namespace hyperstore
