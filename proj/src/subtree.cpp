#include "era/subtree.hpp"

#include "era/binary_io.hpp"
#include "era/errors.hpp"

#include <ostream>

namespace era {

namespace {

constexpr std::string_view kMagic = "ERST";
constexpr std::uint16_t kVersion = 1;

[[noreturn]] void corrupt(const SubtreeArrays& arrays, std::size_t i, const std::string& why)
{
    throw CorruptArraysError("subtree arrays for prefix of length " +
                             std::to_string(arrays.prefix.size()) + ", pair " +
                             std::to_string(i) + ": " + why);
}

// Renumbers nodes into preorder starting from `root`.
std::vector<SubtreeNode> to_preorder(std::vector<SubtreeNode>& nodes, std::uint32_t root)
{
    std::vector<std::uint32_t> new_id(nodes.size());
    std::vector<std::uint32_t> order;
    order.reserve(nodes.size());
    std::vector<std::uint32_t> stack{root};
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        new_id[u] = static_cast<std::uint32_t>(order.size());
        order.push_back(u);
        const auto& kids = nodes[u].children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it)
            stack.push_back(*it);
    }
    std::vector<SubtreeNode> out;
    out.reserve(order.size());
    for (std::uint32_t u : order) {
        SubtreeNode node = std::move(nodes[u]);
        for (auto& c : node.children)
            c = new_id[c];
        out.push_back(std::move(node));
    }
    return out;
}

} // namespace

std::size_t SuffixSubtree::leaf_count() const noexcept
{
    std::size_t count = 0;
    for (const auto& n : nodes)
        count += n.leaf_pos.has_value();
    return count;
}

std::vector<Pos> SuffixSubtree::leaves_in_order() const
{
    // Preorder layout visits leaves left to right.
    std::vector<Pos> out;
    for (const auto& n : nodes) {
        if (n.leaf_pos)
            out.push_back(*n.leaf_pos);
    }
    return out;
}

SuffixSubtree build_subtree(const SubtreeArrays& arrays, const Text& text)
{
    const Pos n_text = text.size();
    const auto& sa = arrays.sa;
    const Pos plen = arrays.prefix.size();
    SuffixSubtree tree;
    tree.prefix = arrays.prefix;
    if (sa.empty())
        throw CorruptArraysError("empty suffix array");
    if (arrays.lcp.size() + 1 != sa.size())
        throw CorruptArraysError("lcp must have |sa|-1 entries");
    for (std::size_t i = 0; i < sa.size(); ++i) {
        if (sa[i] < 1 || sa[i] > n_text || n_text - sa[i] + 1 <= plen)
            corrupt(arrays, i, "suffix position out of range");
    }
    auto suffix_len = [&](Pos pos) { return n_text - pos + 1; };

    if (sa.size() == 1) {
        tree.nodes.push_back({sa[0], suffix_len(sa[0]), {}, sa[0]});
        return tree;
    }

    std::vector<SubtreeNode> nodes;
    nodes.reserve(2 * sa.size());
    nodes.push_back({sa[0], plen, {}, std::nullopt});

    auto add_leaf = [&](std::uint32_t parent, Pos pos, Pos parent_depth) {
        const auto id = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back({pos + parent_depth, suffix_len(pos) - parent_depth, {}, pos});
        nodes[parent].children.push_back(id);
    };

    struct Frame {
        std::uint32_t node;
        Pos depth;
        int last_symbol;  // first symbol of the node's last child edge, -1 = unknown
    };
    std::vector<Frame> stack{{0, plen, -1}};
    add_leaf(0, sa[0], plen);

    for (std::size_t i = 1; i < sa.size(); ++i) {
        const LcpTriple& t = arrays.lcp[i - 1];
        const Pos d = t.depth;
        if (d < plen)
            corrupt(arrays, i, "depth shorter than the prefix");
        if (t.left >= t.right)
            corrupt(arrays, i, "branch symbols out of order");
        if (d >= suffix_len(sa[i - 1]) || d >= suffix_len(sa[i]))
            corrupt(arrays, i, "depth reaches past a suffix end");

        while (stack.back().depth > d)
            stack.pop_back();
        Frame& top = stack.back();
        if (top.depth == d) {
            if (top.last_symbol >= 0 && top.last_symbol != t.left)
                corrupt(arrays, i, "left branch symbol disagrees with the tree");
            if (top.last_symbol >= 0 && t.right <= top.last_symbol)
                corrupt(arrays, i, "children out of order");
            top.last_symbol = t.right;
            add_leaf(top.node, sa[i], d);
            continue;
        }

        // Split the last child edge of `top` at depth d.
        const Pos cut = d - top.depth;
        const std::uint32_t child = nodes[top.node].children.back();
        if (nodes[child].edge_len <= cut)
            corrupt(arrays, i, "split point beyond child edge");
        const auto mid = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back({nodes[child].edge_start, cut, {child}, std::nullopt});
        nodes[child].edge_start += cut;
        nodes[child].edge_len -= cut;
        nodes[top.node].children.back() = mid;
        stack.push_back({mid, d, t.right});
        add_leaf(mid, sa[i], d);
    }

    tree.nodes = to_preorder(nodes, 0);
    return tree;
}

std::string encode_subtree(const SuffixSubtree& tree)
{
    std::string out(kMagic);
    binary::put<std::uint16_t>(out, kVersion);
    binary::put<std::uint16_t>(out, static_cast<std::uint16_t>(tree.prefix.size()));
    out += tree.prefix;
    binary::put<std::uint64_t>(out, tree.nodes.size());
    for (const auto& node : tree.nodes) {
        binary::put<std::uint64_t>(out, node.edge_start);
        binary::put<std::uint64_t>(out, node.edge_len);
        binary::put<std::uint16_t>(out, static_cast<std::uint16_t>(node.children.size()));
        for (std::uint32_t c : node.children)
            binary::put<std::uint32_t>(out, c);
        binary::put<std::uint8_t>(out, node.leaf_pos ? 1 : 0);
        if (node.leaf_pos)
            binary::put<std::uint64_t>(out, *node.leaf_pos);
    }
    return out;
}

std::size_t serialize_subtree(const SuffixSubtree& tree, std::ostream& out, IoStats& stats,
                              Pos block_size)
{
    const std::string bytes = encode_subtree(tree);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("failed writing subtree");
    charge_write(stats, bytes.size(), block_size);
    return bytes.size();
}

SuffixSubtree deserialize_subtree(std::string_view bytes, std::string_view what)
{
    binary::Cursor in(bytes, std::string(what));
    if (in.take(kMagic.size()) != kMagic)
        in.fail("bad magic");
    if (in.get<std::uint16_t>() != kVersion)
        in.fail("unsupported version");
    SuffixSubtree tree;
    tree.prefix = std::string(in.take(in.get<std::uint16_t>()));
    const auto count = in.get<std::uint64_t>();
    // Smallest node record is 19 bytes.
    if (count == 0 || count > in.remaining() / 19)
        in.fail("node count does not match file size");
    tree.nodes.resize(count);
    for (auto& node : tree.nodes) {
        node.edge_start = in.get<std::uint64_t>();
        node.edge_len = in.get<std::uint64_t>();
        const auto kids = in.get<std::uint16_t>();
        node.children.resize(kids);
        for (auto& c : node.children) {
            c = in.get<std::uint32_t>();
            if (c >= count)
                in.fail("child index out of range");
        }
        const auto flag = in.get<std::uint8_t>();
        if (flag > 1)
            in.fail("bad leaf flag");
        if (flag == 1)
            node.leaf_pos = in.get<std::uint64_t>();
    }
    if (!in.at_end())
        in.fail("trailing bytes");
    return tree;
}

std::string check_subtree(const SuffixSubtree& tree, const Text& text)
{
    const auto& nodes = tree.nodes;
    if (nodes.empty())
        return "no nodes";
    // Preorder with root 0: every child id is larger than its parent's and
    // each node is referenced exactly once.
    std::vector<int> refs(nodes.size(), 0);
    for (std::size_t u = 0; u < nodes.size(); ++u) {
        const auto& node = nodes[u];
        if (node.leaf_pos && !node.children.empty())
            return "leaf with children at node " + std::to_string(u);
        if (!node.leaf_pos && node.children.empty())
            return "internal node without children at node " + std::to_string(u);
        if (u != SuffixSubtree::kRoot && !node.leaf_pos && node.children.size() < 2)
            return "unary internal node " + std::to_string(u);
        if (node.edge_len == 0 || node.edge_start < 1 ||
            node.edge_start + node.edge_len - 1 > text.size())
            return "edge out of text bounds at node " + std::to_string(u);
        int prev = -1;
        for (std::uint32_t c : node.children) {
            if (c <= u || c >= nodes.size())
                return "child id not in preorder at node " + std::to_string(u);
            ++refs[c];
            const int sym = text.at(nodes[c].edge_start);
            if (sym <= prev)
                return "children not strictly ordered at node " + std::to_string(u);
            prev = sym;
        }
    }
    for (std::size_t u = 1; u < nodes.size(); ++u) {
        if (refs[u] != 1)
            return "node " + std::to_string(u) + " referenced " + std::to_string(refs[u]) + " times";
    }
    // The root edge spells the prefix.
    if (text.substr(nodes[0].edge_start, tree.prefix.size()) != tree.prefix)
        return "root edge does not spell the prefix";
    return {};
}

} // namespace era
