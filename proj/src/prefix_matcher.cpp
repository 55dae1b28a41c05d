#include "era/prefix_matcher.hpp"

#include "era/errors.hpp"

#include <algorithm>
#include <numeric>

namespace era {

PrefixMatcher::PrefixMatcher(std::span<const SymbolString> patterns)
{
    if (patterns.size() >= kNone)
        throw InvariantError("too many patterns for prefix matcher");
    std::vector<std::uint32_t> order(patterns.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return patterns[a] < patterns[b]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
        const SymbolString& p = patterns[order[i]];
        if (p.empty())
            throw InvariantError("empty pattern in prefix matcher");
        max_length_ = std::max(max_length_, p.size());
        if (i > 0) {
            const SymbolString& prev = patterns[order[i - 1]];
            if (prev.size() <= p.size() && p.compare(0, prev.size(), prev) == 0)
                throw InvariantError("pattern set is not prefix-free");
        }
    }
    nodes_.reserve(patterns.size() + 1);
    build(patterns, order, 0);
}

// Builds the node for the sorted run `order`, all of whose patterns share
// their first `depth` symbols. Returns the node id.
std::uint32_t PrefixMatcher::build(std::span<const SymbolString> patterns,
                                   std::span<const std::uint32_t> order, std::size_t depth)
{
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    if (order.size() == 1 && patterns[order[0]].size() == depth) {
        nodes_[id].pattern = order[0];
        return id;
    }

    // Group boundaries by the symbol at `depth`.
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || patterns[order[i]][depth] != patterns[order[i - 1]][depth])
            starts.push_back(i);
    }
    starts.push_back(order.size());

    const auto first_edge = static_cast<std::uint32_t>(edge_symbol_.size());
    const auto count = static_cast<std::uint32_t>(starts.size() - 1);
    nodes_[id].first_edge = first_edge;
    nodes_[id].edge_count = count;
    edge_symbol_.resize(first_edge + count);
    edge_target_.resize(first_edge + count);
    for (std::uint32_t g = 0; g < count; ++g) {
        auto group = order.subspan(starts[g], starts[g + 1] - starts[g]);
        edge_symbol_[first_edge + g] = static_cast<Symbol>(patterns[group[0]][depth]);
        const std::uint32_t child = build(patterns, group, depth + 1);
        edge_target_[first_edge + g] = child;
    }
    return id;
}

} // namespace era
