#pragma once

// Brute-force reference answers. Nothing here calls into the construction
// pipeline; comparisons are plain symbol-by-symbol loops.

#include "era/text.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace era::oracle {

// All N suffix starts (1-based) in lexicographic order. O(N^2 log N).
std::vector<Pos> naive_suffix_array(const Text& text);

// lcp[i-1] = common prefix length of suffixes sa[i-1] and sa[i].
std::vector<Pos> naive_lcp(const Text& text, const std::vector<Pos>& sa);

// Every start position of `pattern` by sliding window, ascending.
// The empty pattern occurs at 1..N.
std::vector<Pos> naive_search(const Text& text, std::string_view pattern);

// Longest l such that pattern[0..l) occurs, with its leftmost occurrence.
std::pair<Pos, std::optional<Pos>> naive_longest_prefix(const Text& text,
                                                        std::string_view pattern);

// Occurrence count of `pattern` as a substring.
std::uint64_t naive_count(const Text& text, std::string_view pattern);

struct Lrs {
    Pos length = 0;
    std::optional<std::pair<Pos, Pos>> positions;  // ascending pair
};
Lrs longest_repeated_substring(const Text& text);

} // namespace era::oracle
