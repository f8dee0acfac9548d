#ifndef RMATCH_EDGE_SET_HPP
#define RMATCH_EDGE_SET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rmatch {

/// Fixed-width bitmask over the canonical edge indices of one graph.
///
/// An EdgeSet is always interpreted relative to the graph whose edge count
/// it was sized for; combining sets of different widths throws.  Equality is
/// bit-exact and is what memoization keys on.  The first 64 bits live inline,
/// graphs with more edges spill into a heap-allocated tail with identical
/// semantics.
class EdgeSet {
public:
    EdgeSet() = default;

    explicit EdgeSet(std::size_t bit_count)
        : bits_(bit_count),
          tail_(bit_count > 64 ? (bit_count - 1) / 64 : 0, 0) {}

    /// Set of the given width with all bits set.
    static EdgeSet all(std::size_t bit_count) {
        EdgeSet s(bit_count);
        for (std::size_t i = 0; i < bit_count; ++i) s.set(i);
        return s;
    }

    std::size_t bit_count() const { return bits_; }
    bool empty() const {
        if (head_ != 0) return false;
        for (std::uint64_t w : tail_)
            if (w != 0) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t n = std::popcount(head_);
        for (std::uint64_t w : tail_) n += std::popcount(w);
        return n;
    }

    bool test(std::size_t i) const {
        check_index(i);
        return (word(i / 64) >> (i % 64)) & 1u;
    }

    void set(std::size_t i) {
        check_index(i);
        word(i / 64) |= std::uint64_t{1} << (i % 64);
    }

    void reset(std::size_t i) {
        check_index(i);
        word(i / 64) &= ~(std::uint64_t{1} << (i % 64));
    }

    void clear() {
        head_ = 0;
        for (auto& w : tail_) w = 0;
    }

    EdgeSet& operator&=(const EdgeSet& o) {
        check_same(o);
        head_ &= o.head_;
        for (std::size_t i = 0; i < tail_.size(); ++i) tail_[i] &= o.tail_[i];
        return *this;
    }

    EdgeSet& operator|=(const EdgeSet& o) {
        check_same(o);
        head_ |= o.head_;
        for (std::size_t i = 0; i < tail_.size(); ++i) tail_[i] |= o.tail_[i];
        return *this;
    }

    /// this &= ~o
    EdgeSet& and_not(const EdgeSet& o) {
        check_same(o);
        head_ &= ~o.head_;
        for (std::size_t i = 0; i < tail_.size(); ++i) tail_[i] &= ~o.tail_[i];
        return *this;
    }

    friend EdgeSet operator&(EdgeSet a, const EdgeSet& b) { return a &= b; }
    friend EdgeSet operator|(EdgeSet a, const EdgeSet& b) { return a |= b; }
    friend EdgeSet minus(EdgeSet a, const EdgeSet& b) { return a.and_not(b); }

    bool is_subset_of(const EdgeSet& o) const {
        check_same(o);
        if ((head_ & ~o.head_) != 0) return false;
        for (std::size_t i = 0; i < tail_.size(); ++i)
            if ((tail_[i] & ~o.tail_[i]) != 0) return false;
        return true;
    }

    bool intersects(const EdgeSet& o) const {
        check_same(o);
        if ((head_ & o.head_) != 0) return true;
        for (std::size_t i = 0; i < tail_.size(); ++i)
            if ((tail_[i] & o.tail_[i]) != 0) return true;
        return false;
    }

    /// Lowest set bit, or bit_count() when empty.
    std::size_t lowest() const {
        if (head_ != 0) return std::countr_zero(head_);
        for (std::size_t i = 0; i < tail_.size(); ++i)
            if (tail_[i] != 0) return 64 * (i + 1) + std::countr_zero(tail_[i]);
        return bits_;
    }

    /// Calls fn(index) for each set bit in ascending order.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::uint64_t w = head_; w != 0; w &= w - 1)
            fn(static_cast<std::size_t>(std::countr_zero(w)));
        for (std::size_t i = 0; i < tail_.size(); ++i)
            for (std::uint64_t w = tail_[i]; w != 0; w &= w - 1)
                fn(64 * (i + 1) + std::countr_zero(w));
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    friend bool operator==(const EdgeSet& a, const EdgeSet& b) {
        return a.bits_ == b.bits_ && a.head_ == b.head_ && a.tail_ == b.tail_;
    }
    friend bool operator!=(const EdgeSet& a, const EdgeSet& b) { return !(a == b); }

    std::size_t hash() const {
        std::uint64_t h = mix(head_ ^ (0x9e3779b97f4a7c15ULL * (bits_ + 1)));
        for (std::uint64_t w : tail_) h = mix(h ^ w);
        return static_cast<std::size_t>(h);
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t word(std::size_t i) const { return i == 0 ? head_ : tail_[i - 1]; }
    std::uint64_t& word(std::size_t i) { return i == 0 ? head_ : tail_[i - 1]; }

    void check_index(std::size_t i) const {
        if (i >= bits_) throw std::out_of_range("EdgeSet: bit index out of range");
    }
    void check_same(const EdgeSet& o) const {
        if (bits_ != o.bits_)
            throw std::invalid_argument("EdgeSet: operands belong to different graphs");
    }

    std::size_t bits_ = 0;
    std::uint64_t head_ = 0;
    std::vector<std::uint64_t> tail_;
};

struct EdgeSetHash {
    std::size_t operator()(const EdgeSet& s) const { return s.hash(); }
};

}  // namespace rmatch

#endif  // RMATCH_EDGE_SET_HPP
