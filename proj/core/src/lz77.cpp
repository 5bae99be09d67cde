#include "blockgraph/lz77.hpp"

#include <cstring>
#include <stdexcept>
#include <unordered_map>

namespace blockgraph::lz77 {

namespace {

constexpr uint64_t kSeedLen = 8;

inline uint64_t load_seed(const char* p) {
    uint64_t v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

inline uint64_t load_short(const char* p, uint64_t len) {
    uint64_t v = 0;
    std::memcpy(&v, p, len); // len <= 7, keys never collide across lengths
    return v;
}

/// Previous-occurrence index. Sources of length >= 8 are found through
/// position chains keyed by the 8-byte seed at the phrase start; shorter
/// sources through per-length tables that keep only the earliest occurrence.
/// Chains are walked oldest-first, so the first strict improvement is also
/// the smallest source start. Exact keys (the window bytes themselves) mean
/// no hash verification is needed.
class MatchIndex {
public:
    explicit MatchIndex(std::string_view text) : text_(text) {
        chains_.reserve(1 << 12);
        for (auto& m : earliest_) m.reserve(1 << 8);
    }

    // Longest previous factor at pos (0-based). Returns (len, src) with
    // src + len <= pos; len == 0 means no previous occurrence exists.
    std::pair<uint64_t, uint64_t> longest_match(uint64_t pos) {
        const uint64_t n = text_.size();
        uint64_t best_len = 0, best_src = 0;

        if (pos + kSeedLen <= n) {
            advance_chains(pos);
            auto it = chains_.find(load_seed(text_.data() + pos));
            if (it != chains_.end()) {
                const uint64_t remaining = n - pos;
                for (uint64_t q : it->second) {
                    const uint64_t cap = pos - q;
                    if (cap <= best_len) break; // later entries only get shorter
                    if (best_len >= remaining) break;
                    if (best_len >= kSeedLen &&
                        text_[q + best_len] != text_[pos + best_len])
                        continue;
                    uint64_t len = kSeedLen;
                    while (len < cap && pos + len < n && text_[q + len] == text_[pos + len]) ++len;
                    if (len > best_len) {
                        best_len = len;
                        best_src = q;
                    }
                }
            }
        }
        if (best_len < kSeedLen) {
            uint64_t max_short = std::min<uint64_t>(kSeedLen - 1, std::min(n - pos, pos));
            for (uint64_t len = max_short; len > best_len; --len) {
                advance_shorts(len, pos);
                auto& m = earliest_[len - 1];
                auto it = m.find(load_short(text_.data() + pos, len));
                if (it != m.end()) {
                    best_len = len;
                    best_src = it->second;
                    break;
                }
            }
        }
        return {best_len, best_src};
    }

private:
    void advance_chains(uint64_t pos) {
        while (chain_next_ + kSeedLen <= pos) {
            chains_[load_seed(text_.data() + chain_next_)].push_back(chain_next_);
            ++chain_next_;
        }
    }

    void advance_shorts(uint64_t len, uint64_t pos) {
        auto& m = earliest_[len - 1];
        uint64_t& next = short_next_[len - 1];
        while (next + len <= pos) {
            m.emplace(load_short(text_.data() + next, len), next);
            ++next;
        }
    }

    std::string_view text_;
    std::unordered_map<uint64_t, std::vector<uint64_t>> chains_;
    uint64_t chain_next_ = 0;
    std::unordered_map<uint64_t, uint64_t> earliest_[kSeedLen - 1];
    uint64_t short_next_[kSeedLen - 1] = {};
};

} // namespace

std::vector<Phrase> parse(std::string_view text) {
    std::vector<Phrase> out;
    if (text.empty()) return out;

    MatchIndex index(text);
    uint64_t pos = 0;
    while (pos < text.size()) {
        auto [len, src] = index.longest_match(pos);
        Phrase p;
        p.start = pos + 1;
        if (len == 0) {
            p.len = 1;
            p.src = 0;
            p.literal = static_cast<uint8_t>(text[pos]);
            pos += 1;
        } else {
            p.len = len;
            p.src = src + 1;
            pos += len;
        }
        out.push_back(p);
    }
    return out;
}

std::vector<uint64_t> boundaries(std::span<const Phrase> parse) {
    std::vector<uint64_t> out;
    if (parse.size() <= 1) return out;
    out.reserve(parse.size() - 1);
    uint64_t end = 0;
    for (size_t i = 0; i + 1 < parse.size(); ++i) {
        end += parse[i].len;
        out.push_back(end);
    }
    return out;
}

std::string decode(std::span<const Phrase> parse) {
    std::string out;
    for (const Phrase& p : parse) {
        if (p.start != out.size() + 1 || p.len == 0)
            throw std::invalid_argument("lz77::decode: phrases do not tile the text");
        if (p.is_literal()) {
            if (p.len != 1) throw std::invalid_argument("lz77::decode: literal with len != 1");
            out.push_back(static_cast<char>(p.literal));
        } else {
            if (p.src + p.len - 1 >= p.start)
                throw std::invalid_argument("lz77::decode: self-referencing copy");
            out.append(out, p.src - 1, p.len);
        }
    }
    return out;
}

} // namespace blockgraph::lz77
