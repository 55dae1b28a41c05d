#pragma once

#include "era/pem_io.hpp"
#include "era/text.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace era {

// Static trie over a prefix-free set of non-empty patterns, stored as flat
// arrays (children of a node are a contiguous, symbol-ordered edge run).
// match() walks it from the root along a text window.
class PrefixMatcher {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    // Throws InvariantError on an empty or duplicate pattern, or when one
    // pattern is a proper prefix of another.
    explicit PrefixMatcher(std::span<const SymbolString> patterns);

    std::size_t max_length() const noexcept { return max_length_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    // Index (into the constructor's span) of the pattern that is a prefix of
    // window[0..len), or npos.
    std::size_t match(const Symbol* window, std::size_t len) const noexcept
    {
        std::uint32_t node = 0;
        for (std::size_t i = 0; i < len; ++i) {
            const Node& nd = nodes_[node];
            if (nd.pattern != kNone)
                return nd.pattern;
            const Symbol c = window[i];
            const std::uint32_t begin = nd.first_edge, end = nd.first_edge + nd.edge_count;
            std::uint32_t next = kNone;
            if (nd.edge_count <= 8) {
                for (std::uint32_t e = begin; e < end; ++e) {
                    if (edge_symbol_[e] == c) {
                        next = edge_target_[e];
                        break;
                    }
                }
            } else {
                std::uint32_t lo = begin, hi = end;
                while (lo < hi) {
                    const std::uint32_t mid = (lo + hi) / 2;
                    if (edge_symbol_[mid] < c)
                        lo = mid + 1;
                    else
                        hi = mid;
                }
                if (lo < end && edge_symbol_[lo] == c)
                    next = edge_target_[lo];
            }
            if (next == kNone)
                return npos;
            node = next;
        }
        const std::uint32_t p = nodes_[node].pattern;
        return p == kNone ? npos : p;
    }

private:
    static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

    struct Node {
        std::uint32_t first_edge = 0;
        std::uint32_t edge_count = 0;
        std::uint32_t pattern = kNone;
    };

    std::uint32_t build(std::span<const SymbolString> patterns,
                        std::span<const std::uint32_t> order, std::size_t depth);

    std::vector<Node> nodes_;
    std::vector<Symbol> edge_symbol_;
    std::vector<std::uint32_t> edge_target_;
    std::size_t max_length_ = 0;
};

// One full scan of S through `reader`, reporting every text position where a
// pattern of `matcher` starts: on_match(start_pos, pattern_index). The walk
// restarts at every position over a sliding window of the last
// max_length() symbols.
template <typename OnMatch>
void scan_matches(BlockReader& reader, const PrefixMatcher& matcher, OnMatch&& on_match)
{
    const std::size_t width = matcher.max_length();
    if (width == 0) {
        reader.scan([](Pos, Symbol) {});
        return;
    }
    // Each symbol is stored twice so any window is contiguous.
    std::vector<Symbol> ring(2 * width);
    Pos last = 0;
    reader.scan_blocks([&](Pos first, std::span<const Symbol> block) {
        for (std::size_t i = 0; i < block.size(); ++i) {
            const Pos pos = first + i;
            const std::size_t slot = (pos - 1) % width;
            ring[slot] = ring[slot + width] = block[i];
            if (pos >= width) {
                const Pos start = pos - width + 1;
                const std::size_t id = matcher.match(&ring[(start - 1) % width], width);
                if (id != PrefixMatcher::npos)
                    on_match(start, id);
            }
        }
        last = first + block.size() - 1;
    });
    // Start positions with fewer than `width` symbols left.
    const Pos first_short = last >= width ? last - width + 2 : 1;
    for (Pos start = first_short; start <= last; ++start) {
        const std::size_t id =
            matcher.match(&ring[(start - 1) % width], static_cast<std::size_t>(last - start + 1));
        if (id != PrefixMatcher::npos)
            on_match(start, id);
    }
}

} // namespace era
