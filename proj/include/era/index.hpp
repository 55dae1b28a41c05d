#pragma once

#include "era/subtree.hpp"
#include "era/text.hpp"
#include "era/top_trie.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace era {

// Named blobs making up an index. Implementations must allow concurrent
// put() calls with distinct names.
class IndexStore {
public:
    virtual ~IndexStore() = default;
    virtual void put(const std::string& name, std::string_view bytes) = 0;
    // nullopt when the blob does not exist.
    virtual std::optional<std::string> get(const std::string& name) const = 0;
    // All names, sorted.
    virtual std::vector<std::string> names() const = 0;
};

// One file per blob under a directory.
class DirectoryStore final : public IndexStore {
public:
    // Creates the directory when missing; throws IoError if that fails.
    explicit DirectoryStore(std::filesystem::path dir, bool create = true);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    void put(const std::string& name, std::string_view bytes) override;
    std::optional<std::string> get(const std::string& name) const override;
    std::vector<std::string> names() const override;

private:
    std::filesystem::path dir_;
};

class MemoryStore final : public IndexStore {
public:
    void put(const std::string& name, std::string_view bytes) override;
    std::optional<std::string> get(const std::string& name) const override;
    std::vector<std::string> names() const override;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::string> blobs_;
};

// Keeps only a SHA-256 per blob; for runs too large to hold in memory.
class DigestStore final : public IndexStore {
public:
    void put(const std::string& name, std::string_view bytes) override;
    std::optional<std::string> get(const std::string& name) const override;  // the digest
    std::vector<std::string> names() const override;
    std::uint64_t total_bytes() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::string> digests_;
    std::uint64_t total_bytes_ = 0;
};

namespace index_files {
inline constexpr std::string_view kTopTrie = "top_trie.ertt";
inline constexpr std::string_view kManifest = "manifest.txt";
inline constexpr std::string_view kStats = "stats.csv";
inline constexpr std::string_view kText = "text.bin";
} // namespace index_files

// Digest over the top trie and every subtree blob, in name order. Does not
// cover the manifest, stats, or text copy, so it is independent of p.
std::string index_digest(const IndexStore& store);

// Line-based key=value file.
using Manifest = std::map<std::string, std::string>;
std::string format_manifest(const Manifest& manifest);
Manifest parse_manifest(std::string_view bytes);

// Stored text copy: the symbol codes followed by nothing else. The alphabet
// lives in the manifest.
std::string encode_text_blob(const Text& text);
Text decode_text_blob(std::string_view bytes, const Alphabet& alphabet);

std::string hex_encode(std::string_view bytes);
std::string hex_decode(std::string_view hex);

// Query engine over a top trie plus subtree blobs. Edges point into the text,
// so the text must outlive the index.
class Index {
public:
    Index(const Text& text, TopTrie trie, const IndexStore& store);

    // Loads manifest, text copy and top trie from `store`.
    struct Opened;
    static Opened open(const IndexStore& store);

    const Text& text() const noexcept { return *text_; }
    const TopTrie& trie() const noexcept { return trie_; }

    // Patterns are internal symbol codes, without the delimiter.
    bool exists(std::string_view pattern) const;
    std::vector<Pos> locate(std::string_view pattern) const;

    struct LongestPrefix {
        Pos length = 0;
        std::optional<Pos> witness;
    };
    LongestPrefix longest_prefix(std::string_view pattern) const;

    // Throws IndexCorruptError when the blob is missing or malformed.
    SuffixSubtree load_subtree(const TopTrie::Leaf& leaf) const;

    // Every suffix, left to right: visit(position, leaf_depth). The leaf depth
    // is one more than the string depth of the node the leaf hangs from (the
    // symbols needed to tell the suffix apart); a single-leaf subtree's leaf
    // sits at |pi|.
    void for_each_leaf(const std::function<void(Pos, Pos)>& visit) const;
    // Per-subtree variant used by verification: called once per trie leaf
    // with the loaded subtree (nullptr for direct leaves).
    void for_each_subtree(
        const std::function<void(const TopTrie::Leaf&, const SuffixSubtree*)>& visit) const;

    Pos direct_leaf_position(const TopTrie::Leaf& leaf) const noexcept
    {
        return text_->size() - leaf.prefix.size() + 1;
    }

private:
    struct Match;
    // Descends the top trie, then at most one subtree, as far as the
    // pattern matches.
    Match walk(std::string_view pattern) const;
    void collect(const SuffixSubtree& tree, std::uint32_t node, std::vector<Pos>& out) const;
    Pos leftmost_position(std::uint32_t trie_node) const;

    const Text* text_;
    TopTrie trie_;
    const IndexStore* store_;
};

struct Index::Opened {
    Manifest manifest;
    std::unique_ptr<Text> text;
    std::unique_ptr<Index> index;
};

} // namespace era
