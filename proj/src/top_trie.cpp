#include "era/top_trie.hpp"

#include "era/binary_io.hpp"
#include "era/errors.hpp"

#include <algorithm>

namespace era {

namespace {

constexpr std::string_view kMagic = "ERTT";
constexpr std::uint16_t kVersion = 1;

} // namespace

std::string subtree_file_name(std::string_view prefix)
{
    static constexpr char hex[] = "0123456789abcdef";
    std::string name = "st_";
    for (unsigned char c : prefix) {
        name.push_back(hex[c >> 4]);
        name.push_back(hex[c & 0xF]);
    }
    return name;
}

TopTrie TopTrie::build(std::span<const PrefixEntry> entries,
                       std::span<const DirectLeaf> direct_leaves)
{
    std::vector<Leaf> leaves;
    leaves.reserve(entries.size() + direct_leaves.size());
    for (const auto& e : entries) {
        if (e.prefix.empty())
            throw InvariantError("empty prefix in top trie");
        leaves.push_back({e.prefix, subtree_file_name(e.prefix), e.frequency});
    }
    for (const auto& d : direct_leaves) {
        if (d.prefix.empty() || static_cast<Symbol>(d.prefix.back()) != kDelimiter)
            throw InvariantError("direct leaf must end with the delimiter");
        leaves.push_back({d.prefix, std::string(), 1});
    }
    return from_leaves(std::move(leaves));
}

TopTrie TopTrie::from_leaves(std::vector<Leaf> leaves)
{
    std::sort(leaves.begin(), leaves.end(),
              [](const Leaf& a, const Leaf& b) { return a.prefix < b.prefix; });
    for (std::size_t i = 1; i < leaves.size(); ++i) {
        const auto& prev = leaves[i - 1].prefix;
        const auto& cur = leaves[i].prefix;
        if (prev == cur)
            throw InvariantError("duplicate prefix in top trie");
        if (cur.compare(0, prev.size(), prev) == 0)
            throw InvariantError("top trie entries are not prefix-free");
    }

    TopTrie trie;
    trie.nodes_.emplace_back();
    for (std::size_t li = 0; li < leaves.size(); ++li) {
        std::uint32_t cur = kRoot;
        trie.nodes_[cur].leaf_end = static_cast<std::uint32_t>(li + 1);
        for (char ch : leaves[li].prefix) {
            const auto sym = static_cast<Symbol>(ch);
            auto& kids = trie.nodes_[cur].children;
            // Leaves arrive sorted, so a new child is always the last one.
            if (kids.empty() || trie.nodes_[kids.back()].symbol != sym) {
                Node fresh;
                fresh.symbol = sym;
                fresh.depth = trie.nodes_[cur].depth + 1;
                fresh.leaf_begin = static_cast<std::uint32_t>(li);
                const auto id = static_cast<std::uint32_t>(trie.nodes_.size());
                trie.nodes_[cur].children.push_back(id);
                trie.nodes_.push_back(std::move(fresh));
            }
            cur = trie.nodes_[cur].children.back();
            trie.nodes_[cur].leaf_end = static_cast<std::uint32_t>(li + 1);
        }
        trie.nodes_[cur].leaf = static_cast<std::int64_t>(li);
    }
    trie.leaves_ = std::move(leaves);
    return trie;
}

std::optional<std::uint32_t> TopTrie::child(std::uint32_t node, Symbol symbol) const noexcept
{
    const auto& kids = nodes_[node].children;
    auto it = std::lower_bound(kids.begin(), kids.end(), symbol,
                               [&](std::uint32_t id, Symbol s) { return nodes_[id].symbol < s; });
    if (it == kids.end() || nodes_[*it].symbol != symbol)
        return std::nullopt;
    return *it;
}

std::optional<std::size_t> TopTrie::lookup(std::string_view prefix) const noexcept
{
    std::uint32_t cur = kRoot;
    for (char ch : prefix) {
        auto next = child(cur, static_cast<Symbol>(ch));
        if (!next)
            return std::nullopt;
        cur = *next;
    }
    if (nodes_[cur].leaf < 0)
        return std::nullopt;
    return static_cast<std::size_t>(nodes_[cur].leaf);
}

std::string TopTrie::serialize(unsigned sigma) const
{
    std::string out(kMagic);
    binary::put<std::uint16_t>(out, kVersion);
    binary::put<std::uint16_t>(out, static_cast<std::uint16_t>(sigma));
    binary::put<std::uint64_t>(out, leaves_.size());
    for (const auto& leaf : leaves_) {
        binary::put<std::uint16_t>(out, static_cast<std::uint16_t>(leaf.prefix.size()));
        out += leaf.prefix;
        binary::put<std::uint16_t>(out, static_cast<std::uint16_t>(leaf.file_name.size()));
        out += leaf.file_name;
    }
    return out;
}

TopTrie TopTrie::deserialize(std::string_view bytes, unsigned* sigma_out)
{
    binary::Cursor in(bytes, "top trie");
    if (in.take(kMagic.size()) != kMagic)
        in.fail("bad magic");
    if (in.get<std::uint16_t>() != kVersion)
        in.fail("unsupported version");
    const auto sigma = in.get<std::uint16_t>();
    if (sigma_out)
        *sigma_out = sigma;
    const auto count = in.get<std::uint64_t>();
    // Each entry needs at least 5 bytes; reject absurd counts before reserving.
    if (count > in.remaining() / 5 + 1)
        in.fail("entry count exceeds file size");
    std::vector<Leaf> leaves;
    leaves.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Leaf leaf;
        leaf.prefix = std::string(in.take(in.get<std::uint16_t>()));
        leaf.file_name = std::string(in.take(in.get<std::uint16_t>()));
        if (leaf.prefix.empty())
            in.fail("empty prefix");
        if (leaf.is_direct() != leaf.file_name.empty())
            in.fail("file name does not match leaf kind");
        leaves.push_back(std::move(leaf));
    }
    if (!in.at_end())
        in.fail("trailing bytes");
    try {
        return from_leaves(std::move(leaves));
    } catch (const InvariantError& e) {
        throw IndexCorruptError(std::string("top trie: ") + e.what());
    }
}

} // namespace era
