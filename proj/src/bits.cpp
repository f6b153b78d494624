//------------------------------------------------------------------------------
// bits.cpp
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/bits.hpp"

namespace hyperflow {

void Bits::mask_top() {
    uint32_t rem = width_ & 63;
    if (rem)
        words_.back() &= (uint64_t(1) << rem) - 1;
}

Bits Bits::from_uint(uint64_t value, uint32_t width) {
    Bits b(width);
    b.words_[0] = value;
    b.mask_top();
    return b;
}

Bits Bits::ones(uint32_t width) {
    Bits b(width);
    for (auto& w : b.words_)
        w = ~uint64_t(0);
    b.mask_top();
    return b;
}

Bits Bits::from_binary(std::string_view text) {
    assert(!text.empty());
    Bits b(static_cast<uint32_t>(text.size()));
    for (uint32_t i = 0; i < text.size(); ++i) {
        char c = text[text.size() - 1 - i];
        assert(c == '0' || c == '1');
        if (c == '1')
            b.set_bit(i, true);
    }
    return b;
}

bool Bits::all_ones() const {
    for (uint32_t i = 0; i < width_; ++i)
        if (!bit(i))
            return false;
    return true;
}

Bits Bits::resized(uint32_t new_width) const {
    Bits r(new_width);
    size_t n = std::min(r.words_.size(), words_.size());
    for (size_t i = 0; i < n; ++i)
        r.words_[i] = words_[i];
    r.mask_top();
    return r;
}

Bits Bits::operator&(const Bits& o) const {
    assert(width_ == o.width_);
    Bits r(width_);
    for (size_t i = 0; i < words_.size(); ++i)
        r.words_[i] = words_[i] & o.words_[i];
    return r;
}

Bits Bits::operator|(const Bits& o) const {
    assert(width_ == o.width_);
    Bits r(width_);
    for (size_t i = 0; i < words_.size(); ++i)
        r.words_[i] = words_[i] | o.words_[i];
    return r;
}

Bits Bits::operator^(const Bits& o) const {
    assert(width_ == o.width_);
    Bits r(width_);
    for (size_t i = 0; i < words_.size(); ++i)
        r.words_[i] = words_[i] ^ o.words_[i];
    return r;
}

Bits Bits::operator~() const {
    Bits r(width_);
    for (size_t i = 0; i < words_.size(); ++i)
        r.words_[i] = ~words_[i];
    r.mask_top();
    return r;
}

Bits Bits::add(const Bits& o) const {
    assert(width_ == o.width_);
    Bits r(width_);
    uint64_t carry = 0;
    for (size_t i = 0; i < words_.size(); ++i) {
        uint64_t a = words_[i], b = o.words_[i];
        uint64_t s = a + b;
        uint64_t c1 = s < a;
        uint64_t s2 = s + carry;
        uint64_t c2 = s2 < s;
        r.words_[i] = s2;
        carry = c1 | c2;
    }
    r.mask_top();
    return r;
}

Bits Bits::sub(const Bits& o) const { return add(o.negate()); }

Bits Bits::negate() const {
    Bits r = ~*this;
    return r.add(Bits::from_uint(1, width_));
}

Bits Bits::shl(uint64_t n) const {
    Bits r(width_);
    if (n >= width_)
        return r;
    for (uint32_t i = static_cast<uint32_t>(n); i < width_; ++i)
        r.set_bit(i, bit(i - static_cast<uint32_t>(n)));
    return r;
}

Bits Bits::shr(uint64_t n) const {
    Bits r(width_);
    if (n >= width_)
        return r;
    for (uint32_t i = 0; i + static_cast<uint32_t>(n) < width_; ++i)
        r.set_bit(i, bit(i + static_cast<uint32_t>(n)));
    return r;
}

int Bits::compare(const Bits& o) const {
    uint32_t w = std::max(width_, o.width_);
    Bits a = resized(w), b = o.resized(w);
    for (size_t i = a.words_.size(); i-- > 0;) {
        if (a.words_[i] < b.words_[i])
            return -1;
        if (a.words_[i] > b.words_[i])
            return 1;
    }
    return 0;
}

Bits Bits::slice(uint32_t lo, uint32_t hi) const {
    assert(lo <= hi && hi < width_);
    Bits r(hi - lo + 1);
    for (uint32_t i = lo; i <= hi; ++i)
        r.set_bit(i - lo, bit(i));
    return r;
}

void Bits::deposit(uint32_t lo, const Bits& v) {
    assert(lo + v.width() <= width_);
    for (uint32_t i = 0; i < v.width(); ++i)
        set_bit(lo + i, v.bit(i));
}

Bits Bits::concat(const Bits& hi, const Bits& lo) {
    Bits r(hi.width() + lo.width());
    r.deposit(0, lo);
    r.deposit(lo.width(), hi);
    return r;
}

std::string Bits::to_binary() const {
    std::string s(width_, '0');
    for (uint32_t i = 0; i < width_; ++i)
        if (bit(i))
            s[width_ - 1 - i] = '1';
    return s;
}

} // namespace hyperflow
