#include "era/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace era::oracle {

namespace {

// Plain lexicographic comparison of two suffixes, one symbol at a time.
bool suffix_less(std::span<const Symbol> s, Pos a, Pos b)
{
    const std::size_t n = s.size();
    std::size_t i = a - 1, j = b - 1;
    while (i < n && j < n) {
        if (s[i] != s[j])
            return s[i] < s[j];
        ++i;
        ++j;
    }
    return i == n && j != n;
}

Pos common_prefix(std::span<const Symbol> s, Pos a, Pos b)
{
    Pos k = 0;
    while (a - 1 + k < s.size() && b - 1 + k < s.size() && s[a - 1 + k] == s[b - 1 + k])
        ++k;
    return k;
}

bool occurs_at(std::span<const Symbol> s, Pos pos, std::string_view pattern)
{
    if (pos - 1 + pattern.size() > s.size())
        return false;
    for (std::size_t k = 0; k < pattern.size(); ++k) {
        if (s[pos - 1 + k] != static_cast<Symbol>(pattern[k]))
            return false;
    }
    return true;
}

} // namespace

std::vector<Pos> naive_suffix_array(const Text& text)
{
    const auto s = text.symbols();
    std::vector<Pos> sa(s.size());
    std::iota(sa.begin(), sa.end(), Pos{1});
    std::sort(sa.begin(), sa.end(), [&](Pos a, Pos b) { return suffix_less(s, a, b); });
    return sa;
}

std::vector<Pos> naive_lcp(const Text& text, const std::vector<Pos>& sa)
{
    std::vector<Pos> lcp;
    for (std::size_t i = 1; i < sa.size(); ++i)
        lcp.push_back(common_prefix(text.symbols(), sa[i - 1], sa[i]));
    return lcp;
}

std::vector<Pos> naive_search(const Text& text, std::string_view pattern)
{
    std::vector<Pos> out;
    for (Pos pos = 1; pos <= text.size(); ++pos) {
        if (occurs_at(text.symbols(), pos, pattern))
            out.push_back(pos);
    }
    return out;
}

std::pair<Pos, std::optional<Pos>> naive_longest_prefix(const Text& text,
                                                        std::string_view pattern)
{
    Pos best = 0;
    std::optional<Pos> witness;
    const auto s = text.symbols();
    for (Pos pos = 1; pos <= text.size(); ++pos) {
        Pos k = 0;
        while (k < pattern.size() && pos - 1 + k < s.size() &&
               s[pos - 1 + k] == static_cast<Symbol>(pattern[k]))
            ++k;
        if (k > best) {
            best = k;
            witness = pos;
        }
    }
    return {best, witness};
}

std::uint64_t naive_count(const Text& text, std::string_view pattern)
{
    return naive_search(text, pattern).size();
}

Lrs longest_repeated_substring(const Text& text)
{
    const auto sa = naive_suffix_array(text);
    const auto lcp = naive_lcp(text, sa);
    Lrs out;
    for (std::size_t i = 0; i < lcp.size(); ++i) {
        if (lcp[i] > out.length) {
            out.length = lcp[i];
            out.positions = std::minmax(sa[i], sa[i + 1]);
        }
    }
    return out;
}

} // namespace era::oracle
