#pragma once

// Internal helpers for first-occurrence computation: a Mersenne-prime rolling
// hash with batched window scans, and an exact Z-based scan used as the
// collision fallback and for odd-length windows.

#include <cstdint>
#include <cstring>
#include <limits>
#include <string_view>
#include <vector>

namespace blockgraph::detail {

inline constexpr uint64_t kMersenne61 = (1ull << 61) - 1;
inline constexpr uint64_t kHashBase = 741387182425738847ull; // fixed odd base < 2^61-1

inline uint64_t mulmod61(uint64_t a, uint64_t b) {
    __uint128_t x = static_cast<__uint128_t>(a) * b;
    uint64_t lo = static_cast<uint64_t>(x & kMersenne61);
    uint64_t hi = static_cast<uint64_t>(x >> 61);
    uint64_t r = lo + hi;
    if (r >= kMersenne61) r -= kMersenne61;
    return r;
}

inline uint64_t addmod61(uint64_t a, uint64_t b) {
    uint64_t r = a + b;
    if (r >= kMersenne61) r -= kMersenne61;
    return r;
}

inline uint64_t hash_window(std::string_view text, uint64_t pos, uint64_t len) {
    uint64_t h = 0;
    for (uint64_t k = 0; k < len; ++k)
        h = addmod61(mulmod61(h, kHashBase), static_cast<uint8_t>(text[pos + k]));
    return h;
}

/// 0-based position of the first occurrence of text[i..i+len-1]; always
/// <= i. Exact two-string Z matching, no separator byte needed.
uint64_t first_occurrence0(std::string_view text, uint64_t i, uint64_t len);

/// Open-addressing u64 -> u64 map sized for a known number of entries.
class FlatMap64 {
public:
    static constexpr uint64_t kUnset = std::numeric_limits<uint64_t>::max();

    explicit FlatMap64(uint64_t expected) {
        uint64_t cap = 16;
        while (cap < 2 * expected + 2) cap <<= 1;
        mask_ = cap - 1;
        keys_.assign(cap, 0);
        vals_.assign(cap, 0);
        used_.assign(cap, 0);
    }

    // Inserts key with kUnset if absent; returns slot index.
    uint64_t insert_key(uint64_t key) {
        uint64_t s = slot_of(key);
        if (!used_[s]) {
            used_[s] = 1;
            keys_[s] = key;
            vals_[s] = kUnset;
            ++size_;
        }
        return s;
    }

    // Slot of key, or kUnset if missing.
    uint64_t find(uint64_t key) const {
        uint64_t s = hash(key) & mask_;
        while (used_[s]) {
            if (keys_[s] == key) return s;
            s = (s + 1) & mask_;
        }
        return kUnset;
    }

    uint64_t value(uint64_t slot) const { return vals_[slot]; }
    void set_value(uint64_t slot, uint64_t v) { vals_[slot] = v; }
    uint64_t size() const { return size_; }

private:
    uint64_t slot_of(uint64_t key) {
        uint64_t s = hash(key) & mask_;
        while (used_[s] && keys_[s] != key) s = (s + 1) & mask_;
        return s;
    }
    static uint64_t hash(uint64_t x) {
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdull;
        x ^= x >> 33;
        return x;
    }

    std::vector<uint64_t> keys_, vals_;
    std::vector<uint8_t> used_;
    uint64_t mask_ = 0;
    uint64_t size_ = 0;
};

/// Batched earliest-occurrence resolution for fixed-length windows.
///
/// Register every queried window start, then resolve() runs one rolling scan
/// that records, per distinct window hash, the first position carrying it.
/// Lookups verify the bytes; a genuine hash collision falls back to the exact
/// Z scan, so results are exact regardless.
class WindowScanner {
public:
    WindowScanner(std::string_view text, uint64_t len) : text_(text), len_(len) {}

    void add_target(uint64_t pos) { targets_.push_back(pos); }
    uint64_t target_count() const { return targets_.size(); }

    void resolve();

    /// Exact first occurrence of the window starting at the idx-th target.
    uint64_t result(uint64_t idx) const { return results_[idx]; }

private:
    std::string_view text_;
    uint64_t len_;
    std::vector<uint64_t> targets_;
    std::vector<uint64_t> results_;
};

} // namespace blockgraph::detail
