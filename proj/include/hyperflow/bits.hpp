//------------------------------------------------------------------------------
// bits.hpp
// Fixed-width two-state bit vector used for functional values and taint planes
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyperflow {

// Unsigned two-state value of fixed width. Bit 0 is the LSB. Stored
// little-endian across 64-bit words; bits above `width` stay zero.
class Bits {
public:
    explicit Bits(uint32_t width = 1) : width_(width), words_(word_count(width), 0) {
        assert(width >= 1);
    }

    static Bits from_uint(uint64_t value, uint32_t width);
    static Bits ones(uint32_t width);
    // "1010..." MSB first; the string length gives the width.
    static Bits from_binary(std::string_view text);

    uint32_t width() const { return width_; }

    bool bit(uint32_t i) const {
        assert(i < width_);
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set_bit(uint32_t i, bool v) {
        assert(i < width_);
        uint64_t m = uint64_t(1) << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }

    bool any() const {
        for (uint64_t w : words_)
            if (w)
                return true;
        return false;
    }
    bool is_zero() const { return !any(); }
    bool all_ones() const;

    // Lowest 64 bits; callers use this for shift amounts and literal folding.
    uint64_t low64() const { return words_[0]; }

    Bits resized(uint32_t new_width) const;  // zero-extend or truncate

    Bits operator&(const Bits& o) const;
    Bits operator|(const Bits& o) const;
    Bits operator^(const Bits& o) const;
    Bits operator~() const;
    Bits add(const Bits& o) const;
    Bits sub(const Bits& o) const;
    Bits negate() const;
    Bits shl(uint64_t n) const;
    Bits shr(uint64_t n) const;
    int compare(const Bits& o) const;  // unsigned; -1, 0, 1

    // Inclusive bit range [lo, hi]; result width hi-lo+1.
    Bits slice(uint32_t lo, uint32_t hi) const;
    // Writes `v` into bits [lo, lo+v.width()).
    void deposit(uint32_t lo, const Bits& v);
    static Bits concat(const Bits& hi, const Bits& lo);

    bool operator==(const Bits& o) const { return width_ == o.width_ && words_ == o.words_; }
    bool operator!=(const Bits& o) const { return !(*this == o); }

    std::string to_binary() const;  // MSB first, exactly `width` chars

private:
    static uint32_t word_count(uint32_t w) { return (w + 63) / 64; }
    void mask_top();

    uint32_t width_;
    std::vector<uint64_t> words_;
};

} // namespace hyperflow
