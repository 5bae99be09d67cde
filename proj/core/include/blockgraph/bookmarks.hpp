#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockgraph/block_graph.hpp"

namespace blockgraph {

struct BookmarkTarget {
    uint64_t dest = 0;     // node position at the level
    uint64_t offset = 0;   // 0-based offset of the window's first occurrence
    bool clamped = false;  // window was clipped at a text edge
};

/// Pre-registered text position. For every level d above the truncated one
/// it stores where the first occurrence of the window of size
/// block_size(d)/2 ending (left) or starting (right) at pos lives, so
/// extraction around pos can enter the graph at a level matched to the
/// requested length.
struct Bookmark {
    uint64_t pos = 0;  // 1-based
    std::vector<BookmarkTarget> left;   // index 0 = top-most level
    std::vector<BookmarkTarget> right;
};

struct BookmarkSet {
    std::vector<Bookmark> items;  // sorted by pos

    const Bookmark* find(uint64_t pos) const;
    bool empty() const { return items.empty(); }
};

/// Creates bookmarks. Needs the original text because targets are first
/// occurrences; run it右 after build (or on load with the text at hand).
/// Creation is an exclusive phase; the produced bookmarks are immutable.
class BookmarkBuilder {
public:
    BookmarkBuilder(const BlockGraph& graph, std::string_view text);

    Bookmark add(uint64_t pos) const;                       // 1-based
    BookmarkSet add_all(std::vector<uint64_t> positions) const;

private:
    const BlockGraph& graph_;
    std::string_view text_;
    std::vector<std::vector<uint64_t>> grids_;
};

/// Convenience wrapper for a single position.
Bookmark add_bookmark(const BlockGraph& graph, std::string_view text, uint64_t pos);

/// Extracts text[from..to] for an interval touching the bookmark
/// (from <= bm.pos <= to+1) in time linear in the extracted length.
std::string extract_with_bookmark(const BlockGraph& graph, const Bookmark& bm,
                                  uint64_t from, uint64_t to,
                                  TraversalStats* stats = nullptr);

} // namespace blockgraph
