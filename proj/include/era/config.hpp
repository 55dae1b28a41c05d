#pragma once

#include "era/text.hpp"

#include <cstdint>
#include <optional>

namespace era {

// Model parameters. M and B are counted in symbols.
struct BuildConfig {
    Pos memory_budget = Pos{1} << 22;  // M
    Pos block_size = Pos{1} << 12;     // B
    unsigned workers = 1;              // p
    // Longest prefix the vertical phase may produce and the longest tie the
    // horizontal phase may carry; unset means 8 * ceil(log_sigma N).
    std::optional<Pos> max_prefix_len;
    std::uint64_t rng_seed = 0;
    // Mid-iteration assertions in the horizontal phase.
    bool check_invariants = false;

    // Throws ConfigError unless B >= 1, M >= 2B, p >= 1, max_prefix_len >= 1.
    void validate() const;

    Pos capacity() const noexcept { return memory_budget / block_size; }  // floor(M/B)
    Pos work_memory() const noexcept { return memory_budget / 2; }        // M_work

    Pos resolved_max_prefix_len(Pos text_size, unsigned sigma) const;

    // B >= 2 lg N, the "one node per block" condition. Only a warning: small
    // B is legitimate for desk-scale runs.
    bool block_holds_node(Pos text_size) const noexcept;
};

// ceil(log_base(value)) computed exactly on integers; 0 for value <= 1.
unsigned ceil_log(Pos value, unsigned base) noexcept;

} // namespace era
