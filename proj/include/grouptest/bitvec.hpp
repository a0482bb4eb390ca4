#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace gt {

// Fixed-length bit vector backed by 64-bit words. Bits beyond size() are
// kept zero so whole-word comparisons and popcounts are valid.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool value = true) {
        const std::uint64_t mask = std::uint64_t(1) << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    BitVec& operator|=(const BitVec& o) {
        for (std::size_t j = 0; j < words_.size(); ++j) words_[j] |= o.words_[j];
        return *this;
    }
    BitVec& operator&=(const BitVec& o) {
        for (std::size_t j = 0; j < words_.size(); ++j) words_[j] &= o.words_[j];
        return *this;
    }
    // *this &= ~o
    BitVec& and_not(const BitVec& o) {
        for (std::size_t j = 0; j < words_.size(); ++j) words_[j] &= ~o.words_[j];
        return *this;
    }

    bool intersects(const BitVec& o) const {
        for (std::size_t j = 0; j < words_.size(); ++j)
            if (words_[j] & o.words_[j]) return true;
        return false;
    }

    std::size_t count_and(const BitVec& o) const {
        std::size_t c = 0;
        for (std::size_t j = 0; j < words_.size(); ++j)
            c += std::popcount(words_[j] & o.words_[j]);
        return c;
    }

    // True iff every set bit of *this is also set in o.
    bool subset_of(const BitVec& o) const {
        for (std::size_t j = 0; j < words_.size(); ++j)
            if (words_[j] & ~o.words_[j]) return false;
        return true;
    }

    std::size_t find_first() const { return find_from(0); }
    std::size_t find_next(std::size_t prev) const { return find_from(prev + 1); }

    template <class F>
    void for_each_set(F&& f) const {
        for (std::size_t j = 0; j < words_.size(); ++j) {
            std::uint64_t w = words_[j];
            while (w) {
                const int b = std::countr_zero(w);
                f(j * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

    bool operator==(const BitVec& o) const = default;

    const std::vector<std::uint64_t>& words() const { return words_; }

    std::size_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

private:
    std::size_t find_from(std::size_t i) const {
        if (i >= size_) return size_;
        std::size_t j = i >> 6;
        std::uint64_t w = words_[j] & (~std::uint64_t(0) << (i & 63));
        while (true) {
            if (w) {
                const std::size_t pos = j * 64 + static_cast<std::size_t>(std::countr_zero(w));
                return pos < size_ ? pos : size_;
            }
            if (++j == words_.size()) return size_;
            w = words_[j];
        }
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace gt
