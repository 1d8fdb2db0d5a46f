#include "hyperstore/orientation_vector.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hyperstore {

void OrientationVector::push_back(bool positive) {
    if (size_ % 64 == 0) words_.push_back(0);
    if (positive) words_.back() |= std::uint64_t{1} << (63 - size_ % 64);
    ++size_;
}

OrientationVector OrientationVector::prefix(std::size_t count) const {
    if (count > size_) throw std::out_of_range("OrientationVector::prefix: count exceeds size");
    OrientationVector out;
    out.size_ = count;
    out.words_.assign(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>((count + 63) / 64));
    if (count % 64 != 0) out.words_.back() &= ~std::uint64_t{0} << (64 - count % 64);
    return out;
}

std::strong_ordering OrientationVector::compare(const OrientationVector& a,
                                                const OrientationVector& b,
                                                std::uint64_t& bits_inspected) noexcept {
    const std::size_t common = std::min(a.size_, b.size_);
    const std::size_t full_words = (common + 63) / 64;
    for (std::size_t w = 0; w < full_words; ++w) {
        std::uint64_t x = a.words_[w];
        std::uint64_t y = b.words_[w];
        if (w + 1 == full_words && common % 64 != 0) {
            const std::uint64_t mask = ~std::uint64_t{0} << (64 - common % 64);
            x &= mask;
            y &= mask;
        }
        if (x != y) {
            bits_inspected += 64 * w + static_cast<std::uint64_t>(std::countl_zero(x ^ y)) + 1;
            return x < y ? std::strong_ordering::less : std::strong_ordering::greater;
        }
    }
    bits_inspected += common;
    return a.size_ <=> b.size_;
}

std::string OrientationVector::to_hex() const {
    if (size_ == 0) return "-";
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t nibbles = (size_ + 3) / 4;
    std::string out;
    out.reserve(nibbles);
    for (std::size_t k = 0; k < nibbles; ++k) {
        const std::uint64_t word = words_[k / 16];
        out.push_back(digits[(word >> (60 - 4 * (k % 16))) & 0xF]);
    }
    return out;
}

OrientationVector OrientationVector::from_hex(std::string_view hex, std::size_t size) {
    OrientationVector out;
    if (size == 0) {
        if (hex != "-") throw std::invalid_argument("empty orientation vector must be written as '-'");
        return out;
    }
    if (hex.size() != (size + 3) / 4)
        throw std::invalid_argument("orientation vector hex has wrong length");
    out.size_ = size;
    out.words_.assign((size + 63) / 64, 0);
    for (std::size_t k = 0; k < hex.size(); ++k) {
        const char c = hex[k];
        std::uint64_t v = 0;
        if (c >= '0' && c <= '9') v = static_cast<std::uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f') v = static_cast<std::uint64_t>(c - 'a' + 10);
        else throw std::invalid_argument("orientation vector hex has invalid digit");
        out.words_[k / 16] |= v << (60 - 4 * (k % 16));
    }
    if (size % 64 != 0) {
        const std::uint64_t tail = out.words_.back() & ~(~std::uint64_t{0} << (64 - size % 64));
        if (tail != 0) throw std::invalid_argument("orientation vector hex has bits past its length");
    }
    return out;
}

std::string OrientationVector::to_string() const {
    std::string out;
    out.reserve(size_);
    for (std::size_t j = 0; j < size_; ++j) out.push_back((*this)[j] > 0 ? '+' : '-');
    return out;
}

}  // namespace hyperstore
