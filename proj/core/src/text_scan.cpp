#include "text_scan.hpp"

#include <algorithm>

namespace blockgraph::detail {

uint64_t first_occurrence0(std::string_view text, uint64_t i, uint64_t len) {
    if (len == 0 || i == 0) return i;
    const char* pat = text.data() + i;

    // Z-array of the pattern itself.
    std::vector<uint64_t> z(len, 0);
    z[0] = len;
    for (uint64_t k = 1, l = 0, r = 0; k < len; ++k) {
        uint64_t zk = 0;
        if (k < r) zk = std::min(z[k - l], r - k);
        while (k + zk < len && pat[zk] == pat[k + zk]) ++zk;
        z[k] = zk;
        if (k + zk > r) {
            l = k;
            r = k + zk;
        }
    }

    // Scan the text against the pattern with the same l/r window trick.
    const uint64_t n = text.size();
    for (uint64_t k = 0, l = 0, r = 0; k <= i; ++k) {
        uint64_t m = 0;
        if (k < r) m = std::min(z[k - l], r - k);
        while (m < len && k + m < n && text[k + m] == pat[m]) ++m;
        if (m == len) return k;
        if (k + m > r) {
            l = k;
            r = k + m;
        }
    }
    return i; // unreachable: the window matches itself at k == i
}

void WindowScanner::resolve() {
    results_.assign(targets_.size(), 0);
    if (targets_.empty()) return;

    const uint64_t n = text_.size();
    FlatMap64 map(targets_.size());

    std::vector<uint64_t> hashes(targets_.size());
    uint64_t max_target = 0;
    for (uint64_t t = 0; t < targets_.size(); ++t) {
        hashes[t] = hash_window(text_, targets_[t], len_);
        map.insert_key(hashes[t]);
        max_target = std::max(max_target, targets_[t]);
    }

    // One rolling pass; the first position seen per hash is the earliest,
    // because positions are visited in increasing order.
    uint64_t unresolved = map.size();
    uint64_t pow = 1; // base^(len-1)
    for (uint64_t k = 1; k < len_; ++k) pow = mulmod61(pow, kHashBase);
    uint64_t h = hash_window(text_, 0, len_);
    for (uint64_t q = 0; q <= max_target && q + len_ <= n; ++q) {
        if (q > 0) {
            uint64_t out = static_cast<uint8_t>(text_[q - 1]);
            uint64_t sub = addmod61(h, kMersenne61 - mulmod61(out, pow));
            h = addmod61(mulmod61(sub, kHashBase), static_cast<uint8_t>(text_[q + len_ - 1]));
        }
        const uint64_t s = map.find(h);
        if (s != FlatMap64::kUnset && map.value(s) == FlatMap64::kUnset) {
            map.set_value(s, q);
            if (--unresolved == 0) break;
        }
    }

    for (uint64_t t = 0; t < targets_.size(); ++t) {
        const uint64_t s = map.find(hashes[t]);
        const uint64_t cand = map.value(s);
        const uint64_t pos = targets_[t];
        if (cand == pos) {
            results_[t] = pos;
        } else if (cand != FlatMap64::kUnset && cand < pos &&
                   std::memcmp(text_.data() + cand, text_.data() + pos, len_) == 0) {
            results_[t] = cand;
        } else {
            // hash collision: fall back to the exact scan
            results_[t] = first_occurrence0(text_, pos, len_);
        }
    }
}

} // namespace blockgraph::detail
