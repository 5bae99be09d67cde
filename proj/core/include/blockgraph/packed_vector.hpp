#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace blockgraph {

/// Fixed-width bit-packed integer array. Width 0 is allowed and stores
/// nothing (every value reads back as 0).
class PackedIntVector {
public:
    PackedIntVector() = default;
    explicit PackedIntVector(uint32_t width) : width_(width) {
        if (width > 64) throw std::invalid_argument("PackedIntVector: width > 64");
    }
    PackedIntVector(uint32_t width, std::vector<uint64_t> words, uint64_t count)
        : width_(width), words_(std::move(words)), count_(count) {
        if (width > 64) throw std::invalid_argument("PackedIntVector: width > 64");
        const uint64_t need = word_count(width, count);
        if (words_.size() < need) throw std::invalid_argument("PackedIntVector: payload too short");
        words_.resize(need);
    }

    static uint64_t word_count(uint32_t width, uint64_t count) {
        return (count * width + 63) / 64;
    }

    uint32_t width() const { return width_; }
    uint64_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    void reserve(uint64_t count) { words_.reserve(word_count(width_, count)); }

    void push_back(uint64_t value) {
        if (width_ == 0) {
            if (value != 0) throw std::invalid_argument("PackedIntVector: value too wide");
            ++count_;
            return;
        }
        if (width_ < 64 && (value >> width_) != 0)
            throw std::invalid_argument("PackedIntVector: value too wide");
        const uint64_t bit = count_ * width_;
        const uint64_t w = bit / 64, off = bit % 64;
        if (w >= words_.size()) words_.push_back(0);
        words_[w] |= value << off;
        if (off + width_ > 64) {
            words_.push_back(0);
            words_[w + 1] |= value >> (64 - off);
        }
        ++count_;
    }

    uint64_t get(uint64_t i) const {
        if (i >= count_) throw std::out_of_range("PackedIntVector: index out of range");
        if (width_ == 0) return 0;
        const uint64_t bit = i * width_;
        const uint64_t w = bit / 64, off = bit % 64;
        uint64_t v = words_[w] >> off;
        if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
        if (width_ < 64) v &= (1ull << width_) - 1;
        return v;
    }

    uint64_t operator[](uint64_t i) const { return get(i); }

    std::span<const uint64_t> words() const { return words_; }

private:
    uint32_t width_ = 0;
    std::vector<uint64_t> words_;
    uint64_t count_ = 0;
};

} // namespace blockgraph
