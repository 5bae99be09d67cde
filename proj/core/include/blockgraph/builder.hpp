#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "blockgraph/block_graph.hpp"

namespace blockgraph {

struct BuildConfig {
    /// Block length at the deepest, explicitly stored level. Must be a power
    /// of two >= 1; values below 2 build as 2 since a size-1 level has no
    /// integral child grid.
    uint64_t truncate_block_len = 4;
    /// Number of removed top levels; level flat_top_depth is materialized in
    /// full so queries can enter it by direct index. Must not exceed the
    /// truncated depth.
    uint32_t flat_top_depth = 0;
};

/// Builds the block graph of a non-empty byte string.
BlockGraph build(std::string_view text, const BuildConfig& config = {});

/// Smallest 1-based p with text[p..p+j-i] == text[i..j]; always <= i.
uint64_t first_occurrence(std::string_view text, uint64_t i, uint64_t j);

struct LevelStats {
    uint32_t depth = 0;
    uint64_t node_count = 0;
    uint64_t internal_count = 0;
    uint64_t leaf_count = 0;
    uint64_t bits_used = 0;
};

struct ValidationReport {
    bool ok = true;
    uint64_t z = 0;
    std::vector<LevelStats> levels;
    std::vector<std::string> issues;

    void fail(std::string msg) {
        ok = false;
        if (issues.size() < 64) issues.push_back(std::move(msg));
    }
};

/// Exhaustive structural check of a graph against the text it was built
/// from: marking correctness, per-level internal bound (3z), boundary
/// property of first occurrences, leaf record targets and offsets, shared
/// child navigation, and full-text extraction equality.
ValidationReport validate(const BlockGraph& graph, std::string_view text);

} // namespace blockgraph
