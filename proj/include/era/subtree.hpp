#pragma once

#include "era/horizontal.hpp"
#include "era/pem_io.hpp"
#include "era/text.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace era {

// A node stores its incoming edge as (edge_start, edge_len) into S. For every
// node, edge_start minus the string depth of its parent is the start of some
// leaf suffix below it; the root's parent depth is 0, so the root edge spells
// the prefix (or, for a one-leaf subtree, the whole suffix).
struct SubtreeNode {
    Pos edge_start = 0;
    Pos edge_len = 0;
    std::vector<std::uint32_t> children;  // ascending first edge symbol
    std::optional<Pos> leaf_pos;

    bool operator==(const SubtreeNode&) const = default;
};

// Path-compressed trie of all suffixes starting with `prefix`. Nodes are in
// depth-first preorder; the root is node 0.
struct SuffixSubtree {
    SymbolString prefix;
    std::vector<SubtreeNode> nodes;

    static constexpr std::uint32_t kRoot = 0;

    std::size_t leaf_count() const noexcept;
    // Leaf positions left to right.
    std::vector<Pos> leaves_in_order() const;

    bool operator==(const SuffixSubtree&) const = default;
};

// Stack-based left-to-right sweep over SA and LCP triples, linear in |sa|.
// Branch symbols come from the triples. Throws CorruptArraysError on
// inconsistent arrays.
SuffixSubtree build_subtree(const SubtreeArrays& arrays, const Text& text);

// "ERST", version u16, |pi| u16, pi, node count u64, then per node in
// preorder: edge_start u64, edge_len u64, child count u16, child ids u32...,
// leaf flag u8, leaf_pos u64 (only if leaf). Little-endian.
std::string encode_subtree(const SuffixSubtree& tree);
// Writes encode_subtree to `out`, charging ceil(bytes/B) block writes.
// Returns the byte count; throws IoError when the stream fails.
std::size_t serialize_subtree(const SuffixSubtree& tree, std::ostream& out, IoStats& stats,
                              Pos block_size);
// Throws IndexCorruptError on malformed bytes.
SuffixSubtree deserialize_subtree(std::string_view bytes, std::string_view what = "subtree");

// Structural checks: degrees, child order, preorder layout, leaf count.
// Returns an empty string when the tree is well formed, else a description.
std::string check_subtree(const SuffixSubtree& tree, const Text& text);

} // namespace era
