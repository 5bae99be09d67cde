#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blockgraph::lz77 {

/// One factor of the greedy LZSS-style parse: either a single literal byte or
/// a copy of an earlier source interval [src, src+len-1] that ends strictly
/// before the phrase's own start. Text positions are 1-based.
struct Phrase {
    uint64_t start = 0;
    uint64_t len = 0;
    uint64_t src = 0;     // 1-based source start for copies, 0 for literals
    uint8_t literal = 0;  // the byte, for literals

    bool is_literal() const { return src == 0; }

    bool operator==(const Phrase&) const = default;
};

/// Greedy, non-self-referential factorization. Each phrase is the longest
/// prefix of the remaining text that occurs entirely inside the already
/// parsed prefix; ties between equally long sources pick the smallest source
/// start. Empty input yields an empty parse.
std::vector<Phrase> parse(std::string_view text);

/// End positions of every phrase except the last, ascending (z-1 entries).
std::vector<uint64_t> boundaries(std::span<const Phrase> parse);

/// Expands a parse back into the original text.
std::string decode(std::span<const Phrase> parse);

} // namespace blockgraph::lz77
