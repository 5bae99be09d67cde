#include "blockgraph/builder.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>

#include "blockgraph/lz77.hpp"
#include "text_scan.hpp"

namespace blockgraph {

namespace {

uint32_t ceil_log2(uint64_t n) {
    return n <= 1 ? 0 : static_cast<uint32_t>(64 - std::countl_zero(n - 1));
}

struct LevelWork {
    std::vector<uint64_t> grids;
    std::vector<char> is_internal;
};

// Ordinal of grid index t in a sorted grid list.
uint64_t grid_ordinal(const std::vector<uint64_t>& grids, uint64_t t) {
    auto it = std::lower_bound(grids.begin(), grids.end(), t);
    if (it == grids.end() || *it != t)
        throw std::logic_error("block graph builder: destination node missing");
    return static_cast<uint64_t>(it - grids.begin());
}

// 0-based node start at depth d for grid index t.
inline uint64_t grid_start(uint64_t t, uint64_t block) { return t * (block / 2); }

// A grid node survives the padding cleanup iff it is the first on its level
// or its characters are not fully covered by the preceding block.
inline bool grid_survives(uint64_t t, uint64_t stride, uint64_t n) {
    return t == 0 || t * stride + stride < n;
}

} // namespace

uint64_t first_occurrence(std::string_view text, uint64_t i, uint64_t j) {
    if (i < 1 || i > j || j > text.size())
        throw std::out_of_range("first_occurrence: invalid interval");
    return detail::first_occurrence0(text, i - 1, j - i + 1) + 1;
}

BlockGraph build(std::string_view text, const BuildConfig& config) {
    const uint64_t n = text.size();
    if (n == 0) throw std::invalid_argument("block graph build: empty input");
    if (config.truncate_block_len == 0 || !std::has_single_bit(config.truncate_block_len))
        throw std::invalid_argument("block graph build: truncate_block_len must be a power of two");

    const uint32_t h = ceil_log2(n);
    const uint64_t eff_trunc = std::max<uint64_t>(2, config.truncate_block_len);
    const uint32_t trunc_depth =
        h > ceil_log2(eff_trunc) ? h - static_cast<uint32_t>(std::countr_zero(eff_trunc)) : 0;
    const uint32_t top = config.flat_top_depth;
    if (top > trunc_depth)
        throw std::invalid_argument("block graph build: flat_top_depth exceeds the truncated depth");

    BlockGraph::Parts parts;
    parts.n = n;
    parts.height = h;
    parts.top_depth = top;
    parts.trunc_depth = trunc_depth;
    parts.configured_trunc_len = static_cast<uint16_t>(
        std::min<uint64_t>(config.truncate_block_len, 0xffff));

    // --- top level ---------------------------------------------------------
    LevelWork cur;
    if (top == 0) {
        cur.grids = {0};
        cur.is_internal = {1};
    } else {
        const uint64_t sigma = (1ull << (h - top)) / 2;
        const uint64_t t_max = (n - 1) / sigma >= 2 ? (n - 1) / sigma - 1 : 0;
        cur.grids.resize(t_max + 1);
        for (uint64_t t = 0; t <= t_max; ++t) cur.grids[t] = t;
        cur.is_internal.assign(t_max + 1, 0);

        const uint64_t b = 1ull << (h - top);
        detail::WindowScanner scan(text, b);
        std::vector<uint64_t> slot_of(t_max + 1, UINT64_MAX);
        for (uint64_t t = 0; t <= t_max; ++t) {
            const uint64_t start = grid_start(t, b);
            if (start + b <= n) {
                slot_of[t] = scan.target_count();
                scan.add_target(start);
            }
        }
        scan.resolve();
        for (uint64_t t = 0; t <= t_max; ++t) {
            const uint64_t start = grid_start(t, b);
            const uint64_t occ = slot_of[t] != UINT64_MAX
                                     ? scan.result(slot_of[t])
                                     : detail::first_occurrence0(text, start, n - start);
            cur.is_internal[t] = occ == start;
        }
    }

    // --- level loop --------------------------------------------------------
    for (uint32_t d = top; d <= trunc_depth; ++d) {
        const uint64_t b = 1ull << (h - d);
        BlockGraph::Level lv;
        {
            BitVector::Builder bb, rb;
            bb.reserve(cur.grids.size());
            rb.reserve(cur.grids.size());
            for (size_t i = 0; i < cur.grids.size(); ++i) {
                bb.append(cur.is_internal[i]);
                const bool run = i + 1 < cur.grids.size() && cur.is_internal[i] &&
                                 cur.is_internal[i + 1];
                if (run && cur.grids[i + 1] != cur.grids[i] + 1)
                    throw std::logic_error("block graph builder: adjacent internals not grid-adjacent");
                rb.append(run);
            }
            lv.internal = bb.finish();
            lv.adjacent_runs = rb.finish();
        }
        lv.last_grid = cur.grids.back();

        const uint32_t dest_width = d + 1;
        const uint32_t off_width = h > d + 1 ? h - d - 1 : 0;
        lv.leaf_dest = PackedIntVector(dest_width);
        lv.leaf_offset = PackedIntVector(off_width);

        // Child windows of this level's leaves and, when descending further,
        // the next level's node windows share one scan at length b/2.
        const uint64_t w = b / 2;
        detail::WindowScanner scan(text, std::max<uint64_t>(w, 1));

        LevelWork next;
        std::vector<uint64_t> next_slot; // scanner slot per next-level node, UINT64_MAX = clamped
        if (d < trunc_depth) {
            const uint64_t sigma_child = w / 2 > 0 ? w / 2 : 1;
            for (size_t i = 0; i < cur.grids.size(); ++i) {
                if (!cur.is_internal[i]) continue;
                const uint64_t t = cur.grids[i];
                for (uint64_t c = 2 * t; c <= 2 * t + 2; ++c) {
                    if (!grid_survives(c, sigma_child, n)) continue;
                    if (!next.grids.empty() && c <= next.grids.back()) continue;
                    next.grids.push_back(c);
                }
            }
            next_slot.assign(next.grids.size(), UINT64_MAX);
            for (size_t i = 0; i < next.grids.size(); ++i) {
                const uint64_t start = grid_start(next.grids[i], w);
                if (start + w <= n) {
                    next_slot[i] = scan.target_count();
                    scan.add_target(start);
                }
            }
        }

        // leaf child slots: (leaf index, slot, window start, length, scanner slot)
        struct SlotRef {
            uint64_t child_start;
            uint64_t len;
            uint64_t scan_slot; // UINT64_MAX: resolve with the exact scan
            bool absent;
        };
        std::vector<SlotRef> slots;
        slots.reserve(3 * cur.grids.size());
        for (size_t i = 0; i < cur.grids.size(); ++i) {
            if (cur.is_internal[i]) continue;
            const uint64_t su = grid_start(cur.grids[i], b);
            for (uint32_t s = 0; s < 3; ++s) {
                SlotRef ref{0, 0, UINT64_MAX, false};
                if (b == 2) {
                    // degenerate half-size children: two single characters
                    ref.child_start = su + (s == 2 ? 1 : 0);
                    ref.len = 1;
                    ref.absent = s == 2 && su + 1 >= n;
                } else {
                    ref.child_start = su + s * (b / 4);
                    ref.absent = ref.child_start > 0 && ref.child_start + b / 4 >= n;
                    ref.len = ref.absent ? 0 : std::min(w, n - ref.child_start);
                }
                if (!ref.absent && ref.len == w && ref.child_start + w <= n) {
                    ref.scan_slot = scan.target_count();
                    scan.add_target(ref.child_start);
                }
                slots.push_back(ref);
            }
        }

        scan.resolve();

        // mark the next level
        if (d < trunc_depth) {
            next.is_internal.assign(next.grids.size(), 0);
            for (size_t i = 0; i < next.grids.size(); ++i) {
                const uint64_t start = grid_start(next.grids[i], w);
                const uint64_t occ = next_slot[i] != UINT64_MAX
                                         ? scan.result(next_slot[i])
                                         : detail::first_occurrence0(text, start, n - start);
                next.is_internal[i] = occ == start;
            }
        }

        // emit leaf records
        const uint64_t sigma_d = b / 2; // destination stride at this depth
        for (const SlotRef& ref : slots) {
            if (ref.absent) {
                lv.leaf_dest.push_back(0);
                lv.leaf_offset.push_back(0);
                continue;
            }
            const uint64_t occ = ref.scan_slot != UINT64_MAX
                                     ? scan.result(ref.scan_slot)
                                     : detail::first_occurrence0(text, ref.child_start, ref.len);
            uint64_t t_dest = occ / sigma_d;
            if (!grid_survives(t_dest, sigma_d, n)) --t_dest;
            const uint64_t off = occ - t_dest * sigma_d;
            if (off >= sigma_d)
                throw std::logic_error("block graph builder: leaf offset exceeds half block");
            const uint64_t dest = grid_ordinal(cur.grids, t_dest);
            if (!cur.is_internal[dest])
                throw std::logic_error("block graph builder: leaf points at a non-internal node");
            lv.leaf_dest.push_back(dest);
            lv.leaf_offset.push_back(off);
        }

        if (d == trunc_depth) {
            for (size_t i = 0; i < cur.grids.size(); ++i) {
                if (!cur.is_internal[i]) continue;
                const uint64_t start = grid_start(cur.grids[i], b);
                parts.explicit_text.append(text.substr(start, std::min(b, n - start)));
            }
        }

        parts.levels.push_back(std::move(lv));
        cur = std::move(next);
    }

    return BlockGraph(std::move(parts));
}

// ---------------------------------------------------------------------------

ValidationReport validate(const BlockGraph& g, std::string_view text) {
    ValidationReport rep;
    const uint64_t n = g.text_size();
    if (text.size() != n) {
        rep.fail("text length does not match graph");
        return rep;
    }

    const auto parse = lz77::parse(text);
    rep.z = parse.size();
    const auto bnds = lz77::boundaries(parse);

    const auto grids = build_level_grids(g);

    for (uint32_t d = g.top_depth(); d <= g.truncated_depth(); ++d) {
        const auto& lv = g.level(d);
        const auto& level_grids = grids[d - g.top_depth()];
        const uint64_t b = g.block_size(d);
        const uint64_t sigma = b / 2;

        LevelStats st;
        st.depth = d;
        st.node_count = lv.internal.size();
        st.internal_count = lv.internal.ones();
        st.leaf_count = lv.internal.zeros();
        st.bits_used = lv.internal.size() * 2 +
                       lv.leaf_dest.size() * lv.leaf_dest.width() +
                       lv.leaf_offset.size() * lv.leaf_offset.width();
        if (d == g.truncated_depth()) st.bits_used += g.explicit_text().size() * 8;
        rep.levels.push_back(st);

        if (lv.internal.size() != level_grids.size()) {
            rep.fail("level " + std::to_string(d) + ": node count mismatch with navigation");
            continue;
        }
        if (lv.adjacent_runs.size() != lv.internal.size())
            rep.fail("level " + std::to_string(d) + ": |R| != |B|");
        if (lv.leaf_dest.size() != 3 * lv.internal.zeros() ||
            lv.leaf_offset.size() != 3 * lv.internal.zeros())
            rep.fail("level " + std::to_string(d) + ": leaf record count mismatch");

        if (st.internal_count > 3 * rep.z)
            rep.fail("level " + std::to_string(d) + ": internal count " +
                     std::to_string(st.internal_count) + " exceeds 3z = " +
                     std::to_string(3 * rep.z));

        if (d == g.top_depth() && g.top_depth() > 0) {
            const uint64_t t_max = (n - 1) / sigma >= 2 ? (n - 1) / sigma - 1 : 0;
            if (level_grids.size() != t_max + 1)
                rep.fail("flat top level is not fully materialized");
        }

        // first-occurrence status of every node, batched
        detail::WindowScanner scan(text, b);
        std::vector<uint64_t> slot(level_grids.size(), UINT64_MAX);
        for (size_t i = 0; i < level_grids.size(); ++i) {
            const uint64_t start = level_grids[i] * sigma;
            if (start + b <= n) {
                slot[i] = scan.target_count();
                scan.add_target(start);
            }
        }
        scan.resolve();

        for (size_t i = 0; i < level_grids.size(); ++i) {
            const uint64_t t = level_grids[i];
            const uint64_t start = t * sigma;           // 0-based
            const uint64_t len = std::min(b, n - start);
            const uint64_t occ = slot[i] != UINT64_MAX
                                     ? scan.result(slot[i])
                                     : detail::first_occurrence0(text, start, len);
            const bool is_first = occ == start;
            if (is_first != static_cast<bool>(lv.internal[i])) {
                rep.fail("level " + std::to_string(d) + " node " + std::to_string(i) +
                         ": marking disagrees with first occurrence");
                continue;
            }
            if (is_first) {
                // a first occurrence starts the text or touches a phrase boundary
                if (start != 0) {
                    const uint64_t lo = start;            // boundary q >= i-1, 1-based q = start0
                    const uint64_t hi = start + len;      // q <= j, 1-based j = start0+len
                    auto it = std::lower_bound(bnds.begin(), bnds.end(), lo);
                    if (it == bnds.end() || *it > hi)
                        rep.fail("level " + std::to_string(d) + " node " + std::to_string(i) +
                                 ": first occurrence touches no phrase boundary");
                }
            } else {
                // leaf needs an internal parent
                if (d > g.top_depth()) {
                    const auto& up = grids[d - g.top_depth() - 1];
                    const auto& up_lv = g.level(d - 1);
                    bool ok_parent = false;
                    for (uint64_t pt : {t / 2, t / 2 >= 1 ? t / 2 - 1 : t / 2}) {
                        if (2 * pt > t || 2 * pt + 2 < t) continue;
                        auto it = std::lower_bound(up.begin(), up.end(), pt);
                        if (it != up.end() && *it == pt &&
                            up_lv.internal[static_cast<uint64_t>(it - up.begin())])
                            ok_parent = true;
                    }
                    if (!ok_parent)
                        rep.fail("level " + std::to_string(d) + " leaf " + std::to_string(i) +
                                 ": no internal parent");
                }
            }

            if (lv.adjacent_runs[i] !=
                (i + 1 < level_grids.size() && lv.internal[i] && lv.internal[i + 1])) {
                rep.fail("level " + std::to_string(d) + " node " + std::to_string(i) +
                         ": R bit inconsistent");
            }
            if (i + 1 < level_grids.size() && lv.internal[i] && lv.internal[i + 1] &&
                level_grids[i + 1] != t + 1)
                rep.fail("level " + std::to_string(d) + " node " + std::to_string(i) +
                         ": adjacent internals not grid-adjacent");
        }

        // leaf record targets
        for (size_t i = 0; i < level_grids.size(); ++i) {
            if (lv.internal[i]) continue;
            const uint64_t su = level_grids[i] * sigma;
            for (uint32_t s = 0; s < 3; ++s) {
                uint64_t child_start, child_len;
                bool absent;
                if (b == 2) {
                    child_start = su + (s == 2 ? 1 : 0);
                    child_len = 1;
                    absent = s == 2 && su + 1 >= n;
                } else {
                    child_start = su + s * (b / 4);
                    absent = child_start > 0 && child_start + b / 4 >= n;
                    child_len = absent ? 0 : std::min(b / 2, n - child_start);
                }
                if (absent) continue;
                LeafTarget tgt = g.resolve_leaf(d, i, s);
                if (tgt.offset >= std::max<uint64_t>(sigma, 1)) {
                    rep.fail("level " + std::to_string(d) + " leaf " + std::to_string(i) +
                             ": offset out of range");
                    continue;
                }
                if (tgt.dest >= level_grids.size() || !lv.internal[tgt.dest]) {
                    rep.fail("level " + std::to_string(d) + " leaf " + std::to_string(i) +
                             ": slot targets a non-internal node");
                    continue;
                }
                const uint64_t dest_start = level_grids[tgt.dest] * sigma;
                const uint64_t dest_len = std::min(b, n - dest_start);
                if (tgt.offset + child_len > dest_len) {
                    rep.fail("level " + std::to_string(d) + " leaf " + std::to_string(i) +
                             ": slot exceeds destination block");
                    continue;
                }
                if (std::memcmp(text.data() + dest_start + tgt.offset,
                                text.data() + child_start, child_len) != 0)
                    rep.fail("level " + std::to_string(d) + " leaf " + std::to_string(i) +
                             ": slot content mismatch");
            }
        }

        // navigation consistency: children derived by rank arithmetic match the grid layout
        if (d < g.truncated_depth()) {
            const auto& down = grids[d - g.top_depth() + 1];
            const uint64_t sigma_child = g.block_size(d + 1) / 2;
            for (size_t i = 0; i < level_grids.size(); ++i) {
                if (!lv.internal[i]) continue;
                uint64_t child = g.left_child_index(d, i);
                for (uint64_t c = 2 * level_grids[i]; c <= 2 * level_grids[i] + 2; ++c, ++child) {
                    if (!grid_survives(c, sigma_child, n)) continue;
                    if (child >= down.size() || down[child] != c) {
                        rep.fail("level " + std::to_string(d) + " node " + std::to_string(i) +
                                 ": child navigation mismatch");
                        break;
                    }
                }
            }
        }
    }

    // extraction equality over the whole text
    const std::string round = g.extract(1, n);
    if (round != text) rep.fail("full-text extraction mismatch");

    return rep;
}

} // namespace blockgraph
