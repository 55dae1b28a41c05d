#pragma once

#include "era/config.hpp"
#include "era/horizontal.hpp"
#include "era/index.hpp"
#include "era/pem_io.hpp"
#include "era/text.hpp"

#include <string>
#include <vector>

namespace era {

struct BuildReport {
    Pos text_size = 0;
    unsigned sigma = 0;
    unsigned workers = 0;
    std::uint64_t vertical_iterations = 0;
    std::size_t prefix_count = 0;
    std::size_t direct_leaf_count = 0;
    std::size_t vtree_count = 0;

    IoStats vertical;
    std::vector<IoStats> horizontal;  // per worker
    std::vector<IoStats> serialize;   // per worker; top trie charged to worker 0

    double vertical_ms = 0;
    double horizontal_ms = 0;
    WorkTimes times;  // summed over workers
    std::vector<PrepareMetrics> subtrees;

    IoStats horizontal_total() const;
    IoStats serialize_total() const;
    // phase,worker,blocks_read,blocks_written,full_scans,range_reads
    std::string stats_csv() const;
};

// Vertical partitioning, packing, top trie, then parallel subtree
// construction; every subtree is built, serialized and stored by the worker
// that prepared it. Writes the top trie, subtree files, manifest, stats and
// a copy of the text into `store`.
BuildReport build_index(const Text& text, const BuildConfig& config, IndexStore& store);

Manifest build_manifest(const Text& text, const BuildConfig& config, const BuildReport& report);

} // namespace era
