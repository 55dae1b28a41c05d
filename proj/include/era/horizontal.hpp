#pragma once

#include "era/config.hpp"
#include "era/pem_io.hpp"
#include "era/text.hpp"
#include "era/vertical.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace era {

// Branching information between two lexicographically adjacent suffixes:
// they agree on their first `depth` symbols (counted from the suffix start,
// so depth >= |pi|) and continue with `left` < `right`.
struct LcpTriple {
    Symbol left = 0;
    Symbol right = 0;
    Pos depth = 0;

    bool operator==(const LcpTriple&) const = default;
};

// Relative suffix array of the suffixes starting with `prefix`, plus one
// LcpTriple per adjacent pair (lcp[i] sits between sa[i] and sa[i+1]).
struct SubtreeArrays {
    SymbolString prefix;
    std::vector<Pos> sa;
    std::vector<LcpTriple> lcp;

    bool operator==(const SubtreeArrays&) const = default;
};

struct PrepareMetrics {
    SymbolString prefix;
    Pos occurrences = 0;
    std::uint64_t iterations = 0;  // external while-loop rounds
    Pos initial_range = 0;         // range chosen in the first round
    Pos max_active = 0;            // n at the first round
};

// Wall-clock split of the horizontal phase, in milliseconds. Occurrence
// location is attributed to cnt1 for single-member virtual trees and to
// cnt_star otherwise.
struct WorkTimes {
    double cnt1_ms = 0;
    double cnt_star_ms = 0;
    double prepare_ms = 0;
    double emit_ms = 0;

    WorkTimes& operator+=(const WorkTimes& o) noexcept
    {
        cnt1_ms += o.cnt1_ms;
        cnt_star_ms += o.cnt_star_ms;
        prepare_ms += o.prepare_ms;
        emit_ms += o.emit_ms;
        return *this;
    }
};

// Ascending start positions of every member prefix, aligned with
// vtree.members. One full scan. Adds the elapsed time to `times` if given.
std::vector<std::vector<Pos>> locate_occurrences(const VirtualTree& vtree, BlockReader& reader,
                                                 WorkTimes* times = nullptr);

// Symbols to read per unfinished suffix: max(B, floor(M_work / n)) capped at
// M_work, with M_work = floor(M / 2).
Pos get_range_of_symbols(Pos active_count, const BuildConfig& config);

// Sorts the suffixes at `positions` (all occurrences of `prefix`) by reading
// successive ranges of every unfinished suffix and refining active areas,
// producing the relative SA and LCP triples.
SubtreeArrays subtree_prepare(const SymbolString& prefix, std::span<const Pos> positions,
                              const BuildConfig& config, BlockReader& reader,
                              PrepareMetrics* metrics = nullptr);

struct HorizontalResult {
    std::vector<IoStats> worker_stats;  // index = worker id
    std::vector<WorkTimes> worker_times;
    std::vector<PrepareMetrics> subtrees;  // sorted by prefix
    double wall_ms = 0;
};

// Receives every finished SubtreeArrays on the worker that produced it.
// Called concurrently from different workers.
using SubtreeSink = std::function<void(SubtreeArrays&& arrays, unsigned worker)>;

// p workers take virtual trees from a shared queue; each worker owns its
// reader, stats, and prepare state. The first failure (lowest virtual tree
// index) is rethrown: SkewedInputError as is, anything else as BuildError
// naming the prefix in flight.
HorizontalResult run_horizontal(const Text& text, std::span<const VirtualTree> vtrees,
                                const BuildConfig& config, const SubtreeSink& sink);

// Convenience over run_horizontal: gathers all arrays, sorted by prefix.
std::vector<SubtreeArrays> collect_horizontal(const Text& text,
                                              std::span<const VirtualTree> vtrees,
                                              const BuildConfig& config,
                                              HorizontalResult* result = nullptr);

} // namespace era
