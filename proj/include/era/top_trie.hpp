#pragma once

#include "era/text.hpp"
#include "era/vertical.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace era {

// File holding the subtree of prefix pi: "st_" + lowercase hex of the codes.
std::string subtree_file_name(std::string_view prefix);

// The uncompacted top part of the suffix tree. Each leaf is either a
// partition prefix (pointing at its subtree file) or a delimiter-terminated
// direct leaf (empty file name; its suffix starts at N - |prefix| + 1).
class TopTrie {
public:
    struct Leaf {
        SymbolString prefix;
        std::string file_name;
        std::uint64_t frequency = 0;  // 0 when read back from disk

        bool is_direct() const noexcept
        {
            return !prefix.empty() && static_cast<Symbol>(prefix.back()) == kDelimiter;
        }
        bool operator==(const Leaf& o) const
        {
            return prefix == o.prefix && file_name == o.file_name;
        }
    };

    struct Node {
        Symbol symbol = 0;  // label of the edge into this node
        std::uint32_t depth = 0;
        std::vector<std::uint32_t> children;  // ascending by symbol
        std::int64_t leaf = -1;               // index into leaves(), or -1
        // Leaves below this node are leaves()[leaf_begin, leaf_end).
        std::uint32_t leaf_begin = 0;
        std::uint32_t leaf_end = 0;
    };

    static constexpr std::uint32_t kRoot = 0;

    // Entries must be prefix-free across both sets; duplicates throw
    // InvariantError.
    static TopTrie build(std::span<const PrefixEntry> entries,
                         std::span<const DirectLeaf> direct_leaves);

    // Leaves in trie (symbol) order. The delimiter sorts first, so this is
    // also suffix-array order of the subtrees.
    const std::vector<Leaf>& leaves() const noexcept { return leaves_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& node(std::uint32_t id) const { return nodes_[id]; }

    std::optional<std::uint32_t> child(std::uint32_t node, Symbol symbol) const noexcept;
    // Leaf index for exactly `prefix`, walking |prefix| edges.
    std::optional<std::size_t> lookup(std::string_view prefix) const noexcept;

    // "ERTT", version u16, sigma u16, leaf count u64, then per leaf
    // (prefix length u16, prefix, name length u16, name). Little-endian.
    std::string serialize(unsigned sigma) const;
    // Throws IndexCorruptError on malformed input.
    static TopTrie deserialize(std::string_view bytes, unsigned* sigma_out = nullptr);

    bool operator==(const TopTrie& o) const { return leaves_ == o.leaves_; }

private:
    static TopTrie from_leaves(std::vector<Leaf> leaves);

    std::vector<Node> nodes_;
    std::vector<Leaf> leaves_;
};

} // namespace era
