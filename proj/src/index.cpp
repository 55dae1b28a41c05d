#include "era/index.hpp"

#include "era/digest.hpp"
#include "era/errors.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

namespace era {

// ---------------------------------------------------------------- stores

DirectoryStore::DirectoryStore(std::filesystem::path dir, bool create) : dir_(std::move(dir))
{
    std::error_code ec;
    if (create)
        std::filesystem::create_directories(dir_, ec);
    if (!std::filesystem::is_directory(dir_))
        throw IoError("cannot use index directory " + dir_.string() +
                      (ec ? ": " + ec.message() : std::string()));
}

void DirectoryStore::put(const std::string& name, std::string_view bytes)
{
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out)
        throw IoError("failed writing " + path.string());
}

std::optional<std::string> DirectoryStore::get(const std::string& name) const
{
    std::ifstream in(dir_ / name, std::ios::binary);
    if (!in)
        return std::nullopt;
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<std::string> DirectoryStore::names() const
{
    std::vector<std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        if (entry.is_regular_file())
            out.push_back(entry.path().filename().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void MemoryStore::put(const std::string& name, std::string_view bytes)
{
    std::lock_guard lock(mu_);
    blobs_[name] = std::string(bytes);
}

std::optional<std::string> MemoryStore::get(const std::string& name) const
{
    std::lock_guard lock(mu_);
    auto it = blobs_.find(name);
    if (it == blobs_.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::string> MemoryStore::names() const
{
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    for (const auto& [name, _] : blobs_)
        out.push_back(name);
    return out;
}

void DigestStore::put(const std::string& name, std::string_view bytes)
{
    std::string digest = sha256_hex(bytes);
    std::lock_guard lock(mu_);
    digests_[name] = std::move(digest);
    total_bytes_ += bytes.size();
}

std::optional<std::string> DigestStore::get(const std::string& name) const
{
    std::lock_guard lock(mu_);
    auto it = digests_.find(name);
    if (it == digests_.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::string> DigestStore::names() const
{
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    for (const auto& [name, _] : digests_)
        out.push_back(name);
    return out;
}

std::uint64_t DigestStore::total_bytes() const
{
    std::lock_guard lock(mu_);
    return total_bytes_;
}

std::string index_digest(const IndexStore& store)
{
    const bool hashed = dynamic_cast<const DigestStore*>(&store) != nullptr;
    Sha256 h;
    for (const auto& name : store.names()) {
        if (name != index_files::kTopTrie && name.rfind("st_", 0) != 0)
            continue;
        const auto blob = store.get(name);
        const std::string digest = hashed ? *blob : sha256_hex(*blob);
        h.update(name).update("=").update(digest).update("\n");
    }
    return h.hex_digest();
}

// ---------------------------------------------------------------- blobs

std::string format_manifest(const Manifest& manifest)
{
    std::string out;
    for (const auto& [key, value] : manifest)
        out += key + "=" + value + "\n";
    return out;
}

Manifest parse_manifest(std::string_view bytes)
{
    Manifest out;
    std::istringstream in{std::string(bytes)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IndexCorruptError("manifest line without '=': " + line);
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

std::string encode_text_blob(const Text& text)
{
    const auto s = text.symbols();
    return {reinterpret_cast<const char*>(s.data()), s.size()};
}

Text decode_text_blob(std::string_view bytes, const Alphabet& alphabet)
{
    std::vector<Symbol> symbols(bytes.begin(), bytes.end());
    if (symbols.empty() || symbols.back() != kDelimiter)
        throw IndexCorruptError("stored text does not end with the delimiter");
    try {
        return Text::from_symbols(std::move(symbols), alphabet);
    } catch (const Error& e) {
        throw IndexCorruptError(std::string("stored text: ") + e.what());
    }
}

std::string hex_encode(std::string_view bytes)
{
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned char c : bytes) {
        out.push_back(hex[c >> 4]);
        out.push_back(hex[c & 0xF]);
    }
    return out;
}

std::string hex_decode(std::string_view hex)
{
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0)
        throw IndexCorruptError("odd-length hex string");
    std::string out;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw IndexCorruptError("bad hex digit");
        out.push_back(static_cast<char>(hi * 16 + lo));
    }
    return out;
}

// ---------------------------------------------------------------- queries

struct Index::Match {
    Pos matched = 0;
    std::uint32_t trie_node = TopTrie::kRoot;
    // Set when the walk entered a subtree; `node` is the node whose incoming
    // edge holds the end of the match.
    std::optional<SuffixSubtree> tree;
    std::uint32_t node = 0;
    Pos parent_depth = 0;
};

Index::Index(const Text& text, TopTrie trie, const IndexStore& store)
    : text_(&text), trie_(std::move(trie)), store_(&store)
{
}

Index::Opened Index::open(const IndexStore& store)
{
    Opened out;
    const auto manifest_blob = store.get(std::string(index_files::kManifest));
    if (!manifest_blob)
        throw IndexCorruptError("index has no manifest");
    out.manifest = parse_manifest(*manifest_blob);
    const auto alphabet_it = out.manifest.find("alphabet");
    if (alphabet_it == out.manifest.end())
        throw IndexCorruptError("manifest has no alphabet");
    const Alphabet alphabet = Alphabet::from_chars(hex_decode(alphabet_it->second));

    const auto text_blob = store.get(std::string(index_files::kText));
    if (!text_blob)
        throw IndexCorruptError("index has no text copy");
    out.text = std::make_unique<Text>(decode_text_blob(*text_blob, alphabet));

    const auto trie_blob = store.get(std::string(index_files::kTopTrie));
    if (!trie_blob)
        throw IndexCorruptError("index has no top trie");
    out.index = std::make_unique<Index>(*out.text, TopTrie::deserialize(*trie_blob), store);
    return out;
}

SuffixSubtree Index::load_subtree(const TopTrie::Leaf& leaf) const
{
    const auto blob = store_->get(leaf.file_name);
    if (!blob)
        throw IndexCorruptError("missing subtree file " + leaf.file_name);
    SuffixSubtree tree = deserialize_subtree(*blob, leaf.file_name);
    if (tree.prefix != leaf.prefix)
        throw IndexCorruptError("subtree file " + leaf.file_name + " holds another prefix");
    for (const auto& node : tree.nodes) {
        if (node.edge_start < 1 || node.edge_len == 0 ||
            node.edge_start + node.edge_len - 1 > text_->size())
            throw IndexCorruptError("subtree file " + leaf.file_name + " has an edge outside the text");
    }
    return tree;
}

Index::Match Index::walk(std::string_view pattern) const
{
    Match m;
    std::uint32_t cur = TopTrie::kRoot;
    Pos k = 0;
    while (k < pattern.size() && trie_.node(cur).leaf < 0) {
        const auto sym = static_cast<Symbol>(pattern[k]);
        if (sym == kDelimiter)
            break;
        const auto next = trie_.child(cur, sym);
        if (!next)
            break;
        cur = *next;
        ++k;
    }
    m.matched = k;
    m.trie_node = cur;
    const auto leaf_id = trie_.node(cur).leaf;
    if (leaf_id < 0)
        return m;
    const auto& leaf = trie_.leaves()[static_cast<std::size_t>(leaf_id)];
    if (leaf.is_direct())
        return m;

    m.tree = load_subtree(leaf);
    const auto& nodes = m.tree->nodes;
    const Symbol* s = text_->symbols().data();
    std::uint32_t u = SuffixSubtree::kRoot;
    Pos pd = 0;
    Pos j = k;  // offset inside u's edge
    while (true) {
        const SubtreeNode& node = nodes[u];
        while (k < pattern.size() && j < node.edge_len &&
               s[node.edge_start - 1 + j] == static_cast<Symbol>(pattern[k])) {
            ++k;
            ++j;
        }
        if (k == pattern.size() || j < node.edge_len)
            break;
        const auto want = static_cast<Symbol>(pattern[k]);
        std::optional<std::uint32_t> next;
        for (std::uint32_t c : node.children) {
            if (s[nodes[c].edge_start - 1] == want) {
                next = c;
                break;
            }
        }
        if (!next)
            break;
        pd += node.edge_len;
        u = *next;
        j = 0;
    }
    m.matched = k;
    m.node = u;
    m.parent_depth = pd;
    return m;
}

bool Index::exists(std::string_view pattern) const
{
    return walk(pattern).matched == pattern.size();
}

void Index::collect(const SuffixSubtree& tree, std::uint32_t node, std::vector<Pos>& out) const
{
    std::vector<std::uint32_t> stack{node};
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        const auto& nd = tree.nodes[u];
        if (nd.leaf_pos)
            out.push_back(*nd.leaf_pos);
        for (std::uint32_t c : nd.children)
            stack.push_back(c);
    }
}

std::vector<Pos> Index::locate(std::string_view pattern) const
{
    Match m = walk(pattern);
    std::vector<Pos> out;
    if (m.matched != pattern.size())
        return out;
    if (m.tree) {
        collect(*m.tree, m.node, out);
    } else {
        const auto& tn = trie_.node(m.trie_node);
        for (std::uint32_t li = tn.leaf_begin; li < tn.leaf_end; ++li) {
            const auto& leaf = trie_.leaves()[li];
            if (leaf.is_direct()) {
                out.push_back(direct_leaf_position(leaf));
            } else {
                const SuffixSubtree tree = load_subtree(leaf);
                collect(tree, SuffixSubtree::kRoot, out);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Pos Index::leftmost_position(std::uint32_t trie_node) const
{
    const auto& leaf = trie_.leaves()[trie_.node(trie_node).leaf_begin];
    if (leaf.is_direct())
        return direct_leaf_position(leaf);
    return load_subtree(leaf).nodes[SuffixSubtree::kRoot].edge_start;
}

Index::LongestPrefix Index::longest_prefix(std::string_view pattern) const
{
    Match m = walk(pattern);
    LongestPrefix out;
    out.length = m.matched;
    if (m.matched == 0)
        return out;
    if (m.tree)
        out.witness = m.tree->nodes[m.node].edge_start - m.parent_depth;
    else
        out.witness = leftmost_position(m.trie_node);
    return out;
}

void Index::for_each_subtree(
    const std::function<void(const TopTrie::Leaf&, const SuffixSubtree*)>& visit) const
{
    for (const auto& leaf : trie_.leaves()) {
        if (leaf.is_direct()) {
            visit(leaf, nullptr);
        } else {
            const SuffixSubtree tree = load_subtree(leaf);
            visit(leaf, &tree);
        }
    }
}

void Index::for_each_leaf(const std::function<void(Pos, Pos)>& visit) const
{
    for_each_subtree([&](const TopTrie::Leaf& leaf, const SuffixSubtree* tree) {
        if (!tree) {
            visit(direct_leaf_position(leaf), leaf.prefix.size());
            return;
        }
        const auto& nodes = tree->nodes;
        if (nodes.size() == 1) {
            visit(*nodes[0].leaf_pos, leaf.prefix.size());
            return;
        }
        // Preorder layout: a stack of (node, string depth of its parent).
        std::vector<std::pair<std::uint32_t, Pos>> stack{{SuffixSubtree::kRoot, 0}};
        while (!stack.empty()) {
            const auto [u, parent_depth] = stack.back();
            stack.pop_back();
            const auto& nd = nodes[u];
            if (nd.leaf_pos) {
                visit(*nd.leaf_pos, parent_depth + 1);
                continue;
            }
            const Pos depth = parent_depth + nd.edge_len;
            for (auto it = nd.children.rbegin(); it != nd.children.rend(); ++it)
                stack.emplace_back(*it, depth);
        }
    });
}

} // namespace era
