#include "era/build.hpp"

#include "era/subtree.hpp"
#include "era/top_trie.hpp"
#include "era/vertical.hpp"

#include <chrono>
#include <sstream>

namespace era {

namespace {

using Clock = std::chrono::steady_clock;

IoStats sum(const std::vector<IoStats>& parts, Phase phase)
{
    IoStats total;
    total.phase = phase;
    for (const auto& s : parts)
        total += s;
    return total;
}

} // namespace

IoStats BuildReport::horizontal_total() const
{
    return sum(horizontal, Phase::horizontal);
}

IoStats BuildReport::serialize_total() const
{
    return sum(serialize, Phase::serialize);
}

std::string BuildReport::stats_csv() const
{
    std::ostringstream out;
    out << "phase,worker,blocks_read,blocks_written,full_scans,range_reads\n";
    auto row = [&](const IoStats& s) {
        out << to_string(s.phase) << ',' << s.worker << ',' << s.blocks_read << ','
            << s.blocks_written << ',' << s.full_scans << ',' << s.range_reads << '\n';
    };
    row(vertical);
    for (const auto& s : horizontal)
        row(s);
    for (const auto& s : serialize)
        row(s);
    return out.str();
}

Manifest build_manifest(const Text& text, const BuildConfig& config, const BuildReport& report)
{
    Manifest m;
    m["version"] = "1";
    m["n"] = std::to_string(text.size());
    m["sigma"] = std::to_string(text.sigma());
    m["alphabet"] = hex_encode(text.alphabet().chars());
    m["m"] = std::to_string(config.memory_budget);
    m["b"] = std::to_string(config.block_size);
    m["p"] = std::to_string(config.workers);
    m["max_prefix_len"] = std::to_string(config.resolved_max_prefix_len(text.size(), text.sigma()));
    m["text_digest"] = text.digest();
    m["vtree_count"] = std::to_string(report.vtree_count);
    m["prefix_count"] = std::to_string(report.prefix_count);
    m["direct_leaves"] = std::to_string(report.direct_leaf_count);
    m["vertical_iterations"] = std::to_string(report.vertical_iterations);
    return m;
}

BuildReport build_index(const Text& text, const BuildConfig& config, IndexStore& store)
{
    config.validate();
    const unsigned p = config.workers;
    BuildReport report;
    report.text_size = text.size();
    report.sigma = text.sigma();
    report.workers = p;
    report.vertical.phase = Phase::vertical;
    report.serialize.resize(p);
    for (unsigned w = 0; w < p; ++w) {
        report.serialize[w].phase = Phase::serialize;
        report.serialize[w].worker = w;
    }

    const auto t0 = Clock::now();
    BlockReader reader(text, config.block_size, report.vertical);
    VerticalPartition partition = partition_prefixes(config, reader);
    report.vertical_iterations = partition.iterations;
    report.prefix_count = partition.prefixes.size();
    report.direct_leaf_count = partition.direct_leaves.size();
    const TopTrie trie = TopTrie::build(partition.prefixes, partition.direct_leaves);
    const std::vector<VirtualTree> vtrees =
        pack_virtual_trees(std::move(partition.prefixes), config);
    report.vtree_count = vtrees.size();
    report.vertical_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

    const std::string trie_bytes = trie.serialize(text.sigma());
    store.put(std::string(index_files::kTopTrie), trie_bytes);
    charge_write(report.serialize[0], trie_bytes.size(), config.block_size);

    HorizontalResult horizontal =
        run_horizontal(text, vtrees, config, [&](SubtreeArrays&& arrays, unsigned w) {
            const SuffixSubtree tree = build_subtree(arrays, text);
            const std::string bytes = encode_subtree(tree);
            store.put(subtree_file_name(tree.prefix), bytes);
            charge_write(report.serialize[w], bytes.size(), config.block_size);
        });
    report.horizontal = std::move(horizontal.worker_stats);
    for (const auto& t : horizontal.worker_times)
        report.times += t;
    report.subtrees = std::move(horizontal.subtrees);
    report.horizontal_ms = horizontal.wall_ms;

    store.put(std::string(index_files::kText), encode_text_blob(text));
    store.put(std::string(index_files::kManifest),
              format_manifest(build_manifest(text, config, report)));
    store.put(std::string(index_files::kStats), report.stats_csv());
    return report;
}

} // namespace era
