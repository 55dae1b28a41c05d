#pragma once

#include "era/config.hpp"
#include "era/pem_io.hpp"
#include "era/text.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace era {

// A prefix pi together with its frequency f(pi) in S.
struct PrefixEntry {
    SymbolString prefix;
    std::uint64_t frequency = 0;

    bool operator==(const PrefixEntry&) const = default;
};

// A prefix ending in the delimiter. Its subtree is the single leaf at
// `position`, so it never enters a virtual tree.
struct DirectLeaf {
    SymbolString prefix;
    Pos position = 0;

    bool operator==(const DirectLeaf&) const = default;
};

// A bin of prefixes whose subtrees are built together by one worker.
struct VirtualTree {
    std::vector<PrefixEntry> members;
    std::uint64_t load = 0;  // sum of member frequencies

    bool operator==(const VirtualTree&) const = default;
};

struct VerticalPartition {
    std::vector<PrefixEntry> prefixes;      // P, lexicographic order
    std::vector<DirectLeaf> direct_leaves;  // lexicographic order
    std::uint64_t iterations = 0;           // external-loop rounds == full scans
};

// Occurrence counts of equal-length candidates as substrings of S, aligned
// with `candidates`. One full scan.
std::vector<std::uint64_t> count_frequencies(std::span<const SymbolString> candidates,
                                             BlockReader& reader);

// Same result as count_frequencies for any worker count. S is split into
// `workers` chunks of ceil(N/p) start positions; each chunk is read with
// L-1 symbols of overlap so boundary occurrences are counted exactly once.
// Per-chunk partial counts are summed in chunk order.
struct ParallelCount {
    std::vector<std::uint64_t> counts;
    std::vector<IoStats> worker_stats;
};
ParallelCount count_frequencies_parallel(const Text& text,
                                         std::span<const SymbolString> candidates,
                                         unsigned workers, Pos block_size);

// Grows prefixes one symbol at a time until every one satisfies
// 0 < B*f(pi) <= M. Throws SkewedInputError when a prefix of length
// max_prefix_len still needs extending.
VerticalPartition partition_prefixes(const BuildConfig& config, BlockReader& reader);

// First-fit decreasing over capacity floor(M/B): sort by descending
// frequency (ties by ascending prefix), open a bin with the head, then add in
// order every remaining entry that still fits.
std::vector<VirtualTree> pack_virtual_trees(std::vector<PrefixEntry> entries,
                                            const BuildConfig& config);

// Bin packing of bare sizes with the same rule; returns, per bin, indices
// into `sizes` in insertion order. `sizes` must already be sorted
// non-increasing.
std::vector<std::vector<std::size_t>> first_fit_decreasing(std::span<const std::uint64_t> sizes,
                                                           std::uint64_t capacity);

} // namespace era
