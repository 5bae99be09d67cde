#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace blockgraph {

/// Plain bitvector with a two-level rank directory and sampled select.
///
/// rank is answered with one superblock lookup, one block lookup and a single
/// masked popcount; select starts from a positional sample and scans forward.
/// Positions are 0-based; rank is exclusive of the queried position. select
/// takes a 1-based ordinal. Immutable after construction, so concurrent
/// readers need no synchronization.
class BitVector {
public:
    static constexpr uint64_t kWordBits = 64;
    static constexpr uint64_t kSuperblockBits = 512;
    static constexpr uint64_t kSelectSample = 8192;

    BitVector() = default;
    BitVector(std::vector<uint64_t> words, uint64_t bit_count);

    static BitVector from_bits(const std::vector<bool>& bits);

    /// Incremental bit appender used during graph construction.
    class Builder {
    public:
        void append(bool bit);
        void reserve(uint64_t bits);
        uint64_t size() const { return count_; }
        BitVector finish();

    private:
        std::vector<uint64_t> words_;
        uint64_t count_ = 0;
    };

    uint64_t size() const { return bit_count_; }
    bool empty() const { return bit_count_ == 0; }
    uint64_t ones() const { return ones_; }
    uint64_t zeros() const { return bit_count_ - ones_; }

    bool bit(uint64_t i) const;            // bounds-checked access
    bool operator[](uint64_t i) const { return bit(i); }

    uint64_t rank1(uint64_t i) const;      // ones in [0, i); 0 <= i <= size
    uint64_t rank0(uint64_t i) const;
    uint64_t rank(bool b, uint64_t i) const { return b ? rank1(i) : rank0(i); }

    uint64_t select1(uint64_t j) const;    // position of the j-th one, j >= 1
    uint64_t select0(uint64_t j) const;
    uint64_t select(bool b, uint64_t j) const { return b ? select1(j) : select0(j); }

    std::span<const uint64_t> words() const { return words_; }

private:
    void build_directories();
    uint64_t rank1_unchecked(uint64_t i) const;

    std::vector<uint64_t> words_;
    uint64_t bit_count_ = 0;
    uint64_t ones_ = 0;

    // Absolute 1-count at each superblock boundary, relative count at each
    // word boundary within its superblock (<= 448, fits u16).
    std::vector<uint64_t> super_;
    std::vector<uint16_t> blocks_;
    std::vector<uint64_t> select1_samples_;
    std::vector<uint64_t> select0_samples_;

    friend class BitVectorTestPeer;
};

} // namespace blockgraph
