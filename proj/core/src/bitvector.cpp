#include "blockgraph/bitvector.hpp"

#include <bit>
#include <stdexcept>

namespace blockgraph {

namespace {

inline uint64_t popcount64(uint64_t x) { return static_cast<uint64_t>(std::popcount(x)); }

// Position of the j-th set bit inside a word, j >= 1.
inline uint64_t select_in_word(uint64_t word, uint64_t j) {
    uint64_t pos = 0;
    for (uint64_t width = 32; width > 0; width >>= 1) {
        uint64_t low = word & ((width == 64) ? ~0ull : ((1ull << width) - 1));
        uint64_t c = popcount64(low);
        if (j > c) {
            j -= c;
            word >>= width;
            pos += width;
        } else {
            word = low;
        }
    }
    return pos;
}

} // namespace

BitVector::BitVector(std::vector<uint64_t> words, uint64_t bit_count)
    : words_(std::move(words)), bit_count_(bit_count) {
    const uint64_t need = (bit_count_ + kWordBits - 1) / kWordBits;
    if (words_.size() < need) throw std::invalid_argument("BitVector: word payload too short");
    words_.resize(need);
    if (bit_count_ % kWordBits != 0 && !words_.empty()) {
        // clear padding bits so popcounts stay exact
        words_.back() &= (1ull << (bit_count_ % kWordBits)) - 1;
    }
    build_directories();
}

BitVector BitVector::from_bits(const std::vector<bool>& bits) {
    Builder b;
    b.reserve(bits.size());
    for (bool x : bits) b.append(x);
    return b.finish();
}

void BitVector::Builder::reserve(uint64_t bits) { words_.reserve((bits + kWordBits - 1) / kWordBits); }

void BitVector::Builder::append(bool bit) {
    if (count_ % kWordBits == 0) words_.push_back(0);
    if (bit) words_.back() |= 1ull << (count_ % kWordBits);
    ++count_;
}

BitVector BitVector::Builder::finish() { return BitVector(std::move(words_), count_); }

void BitVector::build_directories() {
    const uint64_t nwords = words_.size();
    const uint64_t words_per_sb = kSuperblockBits / kWordBits;
    super_.assign(nwords / words_per_sb + 1, 0);
    blocks_.assign(nwords + 1, 0);

    uint64_t abs = 0, rel = 0;
    for (uint64_t w = 0; w < nwords; ++w) {
        if (w % words_per_sb == 0) {
            super_[w / words_per_sb] = abs;
            rel = 0;
        }
        blocks_[w] = static_cast<uint16_t>(rel);
        const uint64_t c = popcount64(words_[w]);
        abs += c;
        rel += c;
    }
    if (nwords % words_per_sb == 0) super_[nwords / words_per_sb] = abs;
    blocks_[nwords] = static_cast<uint16_t>(rel);
    ones_ = abs;

    select1_samples_.clear();
    select0_samples_.clear();
    uint64_t seen1 = 0, seen0 = 0;
    for (uint64_t w = 0; w < nwords; ++w) {
        uint64_t word = words_[w];
        const uint64_t limit = std::min<uint64_t>(kWordBits, bit_count_ - w * kWordBits);
        for (uint64_t k = 0; k < limit; ++k) {
            const bool b = (word >> k) & 1;
            if (b) {
                if (seen1 % kSelectSample == 0) select1_samples_.push_back(w * kWordBits + k);
                ++seen1;
            } else {
                if (seen0 % kSelectSample == 0) select0_samples_.push_back(w * kWordBits + k);
                ++seen0;
            }
        }
    }
}

bool BitVector::bit(uint64_t i) const {
    if (i >= bit_count_) throw std::out_of_range("BitVector::bit: position out of range");
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1;
}

uint64_t BitVector::rank1_unchecked(uint64_t i) const {
    const uint64_t w = i / kWordBits;
    uint64_t r = super_[w / (kSuperblockBits / kWordBits)] + blocks_[w];
    const uint64_t rem = i % kWordBits;
    if (rem != 0) r += popcount64(words_[w] & ((1ull << rem) - 1));
    return r;
}

uint64_t BitVector::rank1(uint64_t i) const {
    if (i > bit_count_) throw std::out_of_range("BitVector::rank1: position out of range");
    return rank1_unchecked(i);
}

uint64_t BitVector::rank0(uint64_t i) const {
    if (i > bit_count_) throw std::out_of_range("BitVector::rank0: position out of range");
    return i - rank1_unchecked(i);
}

uint64_t BitVector::select1(uint64_t j) const {
    if (j == 0 || j > ones_) throw std::out_of_range("BitVector::select1: no such bit");
    const uint64_t words_per_sb = kSuperblockBits / kWordBits;
    uint64_t s = select1_samples_[(j - 1) / kSelectSample] / kSuperblockBits;
    const uint64_t last_sb = (words_.size() + words_per_sb - 1) / words_per_sb;
    while (s + 1 < last_sb && super_[s + 1] < j) ++s;
    uint64_t w = s * words_per_sb;
    uint64_t before = super_[s];
    for (;; ++w) {
        const uint64_t c = popcount64(words_[w]);
        if (before + c >= j) break;
        before += c;
    }
    return w * kWordBits + select_in_word(words_[w], j - before);
}

uint64_t BitVector::select0(uint64_t j) const {
    if (j == 0 || j > zeros()) throw std::out_of_range("BitVector::select0: no such bit");
    const uint64_t words_per_sb = kSuperblockBits / kWordBits;
    uint64_t s = select0_samples_[(j - 1) / kSelectSample] / kSuperblockBits;
    const uint64_t last_sb = (words_.size() + words_per_sb - 1) / words_per_sb;
    while (s + 1 < last_sb && (s + 1) * kSuperblockBits - super_[s + 1] < j) ++s;
    uint64_t w = s * words_per_sb;
    uint64_t before = s * kSuperblockBits - super_[s];
    for (;; ++w) {
        const uint64_t c = kWordBits - popcount64(words_[w]);
        if (before + c >= j) break;
        before += c;
    }
    return w * kWordBits + select_in_word(~words_[w], j - before);
}

} // namespace blockgraph
