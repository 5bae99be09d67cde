#include "blockgraph/block_graph.hpp"

#include <cassert>
#include <stdexcept>

namespace blockgraph {

BlockGraph::BlockGraph(Parts parts)
    : n_(parts.n),
      height_(parts.height),
      top_depth_(parts.top_depth),
      trunc_depth_(parts.trunc_depth),
      configured_trunc_len_(parts.configured_trunc_len),
      levels_(std::move(parts.levels)),
      explicit_text_(std::move(parts.explicit_text)) {
    if (n_ == 0) throw std::invalid_argument("BlockGraph: empty text");
    if (levels_.size() != trunc_depth_ - top_depth_ + 1)
        throw std::invalid_argument("BlockGraph: level count mismatch");
}

const BlockGraph::Level& BlockGraph::level(uint32_t depth) const {
    if (depth < top_depth_ || depth > trunc_depth_)
        throw std::out_of_range("BlockGraph::level: no such depth");
    return levels_[depth - top_depth_];
}

uint64_t BlockGraph::total_nodes() const {
    uint64_t total = 0;
    for (const Level& lv : levels_) total += lv.internal.size();
    return total;
}

uint64_t BlockGraph::left_child_index(uint32_t depth, uint64_t i) const {
    const Level& lv = level(depth);
    if (depth >= trunc_depth_)
        throw std::invalid_argument("left_child_index: truncated depth has no children");
    if (!lv.internal.bit(i))
        throw std::invalid_argument("left_child_index: position is a leaf");
    return left_child_unchecked(lv, i);
}

LeafTarget BlockGraph::resolve_leaf(uint32_t depth, uint64_t i, uint32_t child_slot) const {
    const Level& lv = level(depth);
    if (child_slot > 2) throw std::invalid_argument("resolve_leaf: slot must be 0, 1 or 2");
    if (lv.internal.bit(i)) throw std::invalid_argument("resolve_leaf: position is internal");
    if (i == lv.internal.size() - 1) {
        // only the level's last node can have lost a child to the padded tail
        const uint64_t b = block_size(depth);
        const uint64_t start0 = lv.last_grid * (b / 2);
        bool absent;
        if (b == 2) {
            absent = child_slot == 2 && start0 + 1 >= n_;
        } else {
            const uint64_t child_start0 = start0 + child_slot * (b / 4);
            absent = child_start0 > 0 && child_start0 + b / 4 + 1 > n_;
        }
        if (absent) throw std::out_of_range("resolve_leaf: no such child");
    }
    const uint64_t r = lv.internal.rank0(i);
    return LeafTarget{lv.leaf_dest.get(3 * r + child_slot), lv.leaf_offset.get(3 * r + child_slot)};
}

namespace {

struct Piece {
    uint64_t i, j;
    uint32_t slot;
};

// Decomposes a local interval [i..j] of a size-b block into at most three
// pieces, each contained in one child interval and each at least b/8 long.
// Children are [1..b/2], [b/4+1..3b/4], [b/2+1..b].
inline int split_interval(uint64_t b, uint64_t i, uint64_t j, Piece out[3]) {
    const uint64_t H = b / 2, Q = b / 4, E = b / 8;
    if (b == 2) {
        out[0] = {1, 1, 0};
        out[1] = {2, 2, 2};
        return 2;
    }
    if (j <= 3 * Q) { // crosses only the left/center boundary
        const uint64_t c = std::min(H, j - E);
        out[0] = {i, c, 0};
        out[1] = {c + 1, j, 1};
        return 2;
    }
    if (i > Q) { // crosses only the center/right boundary
        const uint64_t c = std::max(H, i + E - 1);
        out[0] = {i, c, 1};
        out[1] = {c + 1, j, 2};
        return 2;
    }
    const uint64_t c1 = std::max(Q, i + E - 1);
    const uint64_t c2 = std::min(3 * Q, j - E);
    out[0] = {i, c1, 0};
    out[1] = {c1 + 1, c2, 1};
    out[2] = {c2 + 1, j, 2};
    return 3;
}

// Child slot whose interval contains [i..j], or -1 if a split is needed.
// Picks the leftmost containing child, which also routes around children
// clamped off the padded tail.
inline int containing_child(uint64_t b, uint64_t i, uint64_t j) {
    const uint64_t H = b / 2, Q = b / 4;
    if (j <= H) return 0;
    if (i > Q && j <= 3 * Q) return 1;
    if (i > H) return 2;
    return -1;
}

inline uint64_t slot_shift(uint64_t b, uint32_t slot) { return slot * (b / 4); }

} // namespace

void BlockGraph::extract_node(uint32_t depth, uint64_t ord, uint64_t i, uint64_t j,
                              std::string& out, TraversalStats* stats) const {
    const Level& lv = levels_[depth - top_depth_];
    const uint64_t b = block_size(depth);
    if (stats) stats->visit(depth);
    assert(i >= 1 && i <= j && j <= b);

    const bool internal = lv.internal[ord];
    if (depth == trunc_depth_ && internal) {
        const uint64_t t_off = lv.internal.rank1(ord) * truncate_block_len();
        out.append(explicit_text_, t_off + i - 1, j - i + 1);
        return;
    }

    int slot = containing_child(b, i, j);
    if (slot >= 0) {
        const uint64_t shift = b == 2 ? (slot == 2 ? 1 : 0) : slot_shift(b, slot);
        if (internal) {
            extract_node(depth + 1, left_child_unchecked(lv, ord) + slot,
                         i - shift, j - shift, out, stats);
        } else {
            const uint64_t r = lv.internal.rank0(ord);
            const uint64_t dest = lv.leaf_dest.get(3 * r + slot);
            const uint64_t off = lv.leaf_offset.get(3 * r + slot);
            if (stats) ++stats->leaf_jumps;
            extract_node(depth, dest, off + (i - shift), off + (j - shift), out, stats);
        }
        return;
    }

    Piece pieces[3];
    const int np = split_interval(b, i, j, pieces);
    if (stats) {
        ++stats->splits;
        for (int p = 0; p < np; ++p)
            if (pieces[p].j - pieces[p].i + 1 < std::max<uint64_t>(1, b / 8))
                ++stats->short_split_pieces;
    }
    for (int p = 0; p < np; ++p) {
        const Piece& pc = pieces[p];
        const uint64_t shift = b == 2 ? (pc.slot == 2 ? 1 : 0) : slot_shift(b, pc.slot);
        if (internal) {
            extract_node(depth + 1, left_child_unchecked(lv, ord) + pc.slot,
                         pc.i - shift, pc.j - shift, out, stats);
        } else {
            const uint64_t r = lv.internal.rank0(ord);
            const uint64_t dest = lv.leaf_dest.get(3 * r + pc.slot);
            const uint64_t off = lv.leaf_offset.get(3 * r + pc.slot);
            if (stats) ++stats->leaf_jumps;
            extract_node(depth, dest, off + (pc.i - shift), off + (pc.j - shift), out, stats);
        }
    }
}

void BlockGraph::extract_at(uint32_t depth, uint64_t ordinal, uint64_t i, uint64_t j,
                            std::string& out, TraversalStats* stats) const {
    extract_node(depth, ordinal, i, j, out, stats);
}

std::string BlockGraph::extract(uint64_t from, uint64_t to, TraversalStats* stats) const {
    if (from < 1 || from > to || to > n_)
        throw std::out_of_range("BlockGraph::extract: invalid range");
    std::string out;
    out.reserve(to - from + 1);
    if (top_depth_ == 0) {
        extract_node(0, 0, from, to, out, stats);
        return out;
    }
    // flat top: enter level top_depth_ directly, chopping at grid cells
    const Level& lv = levels_[0];
    const uint64_t sigma = block_size(top_depth_) / 2;
    const uint64_t t_max = lv.internal.size() - 1;
    uint64_t f = from;
    while (f <= to) {
        uint64_t t = (f - 1) / sigma;
        if (t > t_max) t = t_max;
        const uint64_t node_start = 1 + t * sigma;
        uint64_t piece_end = std::min(to, t == t_max ? n_ : node_start + sigma - 1);
        if (piece_end < f) piece_end = to; // defensive; cannot happen
        extract_node(top_depth_, t, f - node_start + 1, piece_end - node_start + 1, out, stats);
        f = piece_end + 1;
    }
    return out;
}

uint8_t BlockGraph::access(uint64_t pos, TraversalStats* stats) const {
    if (pos < 1 || pos > n_) throw std::out_of_range("BlockGraph::access: position out of range");
    std::string out;
    if (top_depth_ == 0) {
        extract_node(0, 0, pos, pos, out, stats);
    } else {
        const uint64_t sigma = block_size(top_depth_) / 2;
        uint64_t t = (pos - 1) / sigma;
        const uint64_t t_max = levels_[0].internal.size() - 1;
        if (t > t_max) t = t_max;
        extract_node(top_depth_, t, pos - t * sigma, pos - t * sigma, out, stats);
    }
    return static_cast<uint8_t>(out[0]);
}

std::vector<std::vector<uint64_t>> build_level_grids(const BlockGraph& g) {
    std::vector<std::vector<uint64_t>> out;
    for_each_level_grid(g, [&](uint32_t, const std::vector<uint64_t>& grids) {
        out.push_back(grids);
    });
    return out;
}

std::pair<uint64_t, uint64_t> node_interval(const BlockGraph& g, uint32_t depth, uint64_t grid) {
    const uint64_t b = g.block_size(depth);
    const uint64_t start = 1 + grid * (b / 2);
    return {start, std::min(g.text_size(), start + b - 1)};
}

} // namespace blockgraph
