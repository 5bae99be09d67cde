#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "blockgraph/bitvector.hpp"
#include "blockgraph/packed_vector.hpp"

namespace blockgraph {

/// Per-query instrumentation. Passed explicitly so queries stay free of
/// shared mutable state.
struct TraversalStats {
    uint64_t node_visits = 0;
    uint64_t leaf_jumps = 0;
    uint64_t splits = 0;
    uint64_t short_split_pieces = 0;  // split pieces below an eighth of the block size
    uint32_t shallowest_depth = std::numeric_limits<uint32_t>::max();

    void visit(uint32_t depth) {
        ++node_visits;
        if (depth < shallowest_depth) shallowest_depth = depth;
    }
};

struct LeafTarget {
    uint64_t dest = 0;    // node position in B_d at the same depth
    uint64_t offset = 0;  // 0-based start offset inside the destination block
};

/// Queryable block graph over a byte string.
///
/// Level d covers the text with blocks of size 2^(height-d) at half-block
/// stride. B_d marks internal nodes (first occurrences); leaves carry three
/// packed redirection records, one per child slot. The deepest level stores
/// its internal blocks verbatim in one concatenated string.
class BlockGraph {
public:
    struct Level {
        BitVector internal;        // B_d: 1 = internal, 0 = leaf
        BitVector adjacent_runs;   // R_d: 1 iff B_d[i] and B_d[i+1]
        PackedIntVector leaf_dest; // 3 slots per leaf
        PackedIntVector leaf_offset;
        uint64_t last_grid = 0;    // grid index of the level's last node (rebuilt on load)
    };

    struct Parts {
        uint64_t n = 0;
        uint32_t height = 0;
        uint32_t top_depth = 0;
        uint32_t trunc_depth = 0;
        uint16_t configured_trunc_len = 4;
        std::vector<Level> levels;
        std::string explicit_text;
    };

    BlockGraph() = default;
    explicit BlockGraph(Parts parts);

    uint64_t text_size() const { return n_; }
    uint32_t height() const { return height_; }
    uint32_t top_depth() const { return top_depth_; }
    uint32_t truncated_depth() const { return trunc_depth_; }
    uint16_t configured_trunc_len() const { return configured_trunc_len_; }
    uint64_t block_size(uint32_t depth) const { return 1ull << (height_ - depth); }
    uint64_t truncate_block_len() const { return block_size(trunc_depth_); }
    uint32_t level_count() const { return static_cast<uint32_t>(levels_.size()); }

    const Level& level(uint32_t depth) const;
    const std::string& explicit_text() const { return explicit_text_; }

    /// Position in B_{d+1} of node i's left child; center and right children
    /// follow at +1 and +2. Only valid for internal nodes above the
    /// truncated depth.
    uint64_t left_child_index(uint32_t depth, uint64_t i) const;

    /// Redirection record for a leaf's child slot. Throws if the position is
    /// internal or the slot's child fell off the text's padded tail.
    LeafTarget resolve_leaf(uint32_t depth, uint64_t i, uint32_t child_slot) const;

    /// Single character at 1-based position pos.
    uint8_t access(uint64_t pos, TraversalStats* stats = nullptr) const;

    /// Exact substring text[from..to], 1-based inclusive.
    std::string extract(uint64_t from, uint64_t to, TraversalStats* stats = nullptr) const;

    /// Extraction of the local 1-based range [i..j] inside a given node;
    /// entry point used by bookmarks. The caller guarantees the range lies
    /// inside the node's character part.
    void extract_at(uint32_t depth, uint64_t ordinal, uint64_t i, uint64_t j,
                    std::string& out, TraversalStats* stats = nullptr) const;

    uint64_t total_nodes() const;

private:
    void extract_node(uint32_t depth, uint64_t ord, uint64_t i, uint64_t j,
                      std::string& out, TraversalStats* stats) const;
    uint64_t left_child_unchecked(const Level& lv, uint64_t i) const {
        return 3 * lv.internal.rank1(i) - lv.adjacent_runs.rank1(i);
    }

    uint64_t n_ = 0;
    uint32_t height_ = 0;
    uint32_t top_depth_ = 0;
    uint32_t trunc_depth_ = 0;
    uint16_t configured_trunc_len_ = 4;
    std::vector<Level> levels_;
    std::string explicit_text_;
};

/// Grid indices of every node, reconstructed level by level from the
/// navigation structure. fn is called once per depth with the grid index of
/// each node in level order. Offline helper for validation, statistics and
/// bookmark creation; queries never need it.
template <typename Fn>
void for_each_level_grid(const BlockGraph& g, Fn&& fn) {
    std::vector<uint64_t> grids;
    const uint32_t top = g.top_depth();
    if (top == 0) {
        grids = {0};
    } else {
        // flat top level: every surviving grid node exists, ordinal == grid
        grids.resize(g.level(top).internal.size());
        for (uint64_t i = 0; i < grids.size(); ++i) grids[i] = i;
    }
    fn(top, static_cast<const std::vector<uint64_t>&>(grids));
    for (uint32_t d = top; d < g.truncated_depth(); ++d) {
        const auto& lv = g.level(d);
        const uint64_t sigma_child = g.block_size(d + 1) / 2;
        std::vector<uint64_t> next;
        for (uint64_t i = 0; i < lv.internal.size(); ++i) {
            if (!lv.internal[i]) continue;
            const uint64_t t = grids[i];
            for (uint64_t c = 2 * t; c <= 2 * t + 2; ++c) {
                if (c > 0 && c * sigma_child + sigma_child >= g.text_size()) continue; // padded tail
                if (next.empty() || c > next.back()) next.push_back(c);
            }
        }
        grids = std::move(next);
        fn(d + 1, static_cast<const std::vector<uint64_t>&>(grids));
    }
}

/// Fully materialized grid map (one vector per level, indexed depth-top).
std::vector<std::vector<uint64_t>> build_level_grids(const BlockGraph& g);

/// 1-based character interval [first, last] of a node.
std::pair<uint64_t, uint64_t> node_interval(const BlockGraph& g, uint32_t depth, uint64_t grid);

} // namespace blockgraph
