#include "era/vertical.hpp"

#include "era/errors.hpp"
#include "era/prefix_matcher.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace era {

namespace {

std::size_t common_length(std::span<const SymbolString> candidates)
{
    if (candidates.empty())
        return 0;
    const std::size_t len = candidates.front().size();
    for (const auto& c : candidates) {
        if (c.size() != len)
            throw InvariantError("frequency candidates must share one length");
    }
    return len;
}

struct CountResult {
    std::vector<std::uint64_t> counts;
    // Candidate occurring at N-L, immediately before the delimiter, if any.
    std::size_t tail = PrefixMatcher::npos;
};

CountResult count_with_tail(std::span<const SymbolString> candidates, BlockReader& reader)
{
    CountResult result;
    result.counts.assign(candidates.size(), 0);
    const std::size_t len = common_length(candidates);
    if (candidates.empty()) {
        reader.scan([](Pos, Symbol) {});
        return result;
    }
    const PrefixMatcher matcher(candidates);
    const Pos n = reader.text().size();
    const Pos tail_start = n > len ? n - len : 0;
    scan_matches(reader, matcher, [&](Pos start, std::size_t id) {
        ++result.counts[id];
        if (start == tail_start)
            result.tail = id;
    });
    return result;
}

} // namespace

std::vector<std::uint64_t> count_frequencies(std::span<const SymbolString> candidates,
                                             BlockReader& reader)
{
    return count_with_tail(candidates, reader).counts;
}

ParallelCount count_frequencies_parallel(const Text& text,
                                         std::span<const SymbolString> candidates,
                                         unsigned workers, Pos block_size)
{
    if (workers < 1)
        throw ConfigError("count_frequencies_parallel needs at least one worker");
    const std::size_t len = common_length(candidates);
    ParallelCount result;
    result.counts.assign(candidates.size(), 0);
    result.worker_stats.resize(workers);
    for (unsigned w = 0; w < workers; ++w) {
        result.worker_stats[w].phase = Phase::vertical;
        result.worker_stats[w].worker = w;
    }
    if (candidates.empty())
        return result;

    if (workers == 1) {
        // Same transfers as the sequential path, counter for counter.
        BlockReader reader(text, block_size, result.worker_stats[0]);
        result.counts = count_frequencies(candidates, reader);
        return result;
    }

    const PrefixMatcher matcher(candidates);
    const Pos n = text.size();
    const Pos chunk = (n + workers - 1) / workers;
    std::vector<std::vector<std::uint64_t>> partial(workers);

    auto count_chunk = [&](unsigned w) {
        auto& counts = partial[w];
        counts.assign(candidates.size(), 0);
        const Pos first = Pos{w} * chunk + 1;
        if (first > n)
            return;
        const Pos last_start = std::min(n, first + chunk - 1);
        // Occurrences starting in [first, last_start] may run L-1 symbols past
        // the chunk end.
        const Pos read_len = std::min(n - first + 1, last_start - first + 1 + len - 1);
        BlockReader reader(text, block_size, result.worker_stats[w]);
        const auto window = reader.read_range(first, read_len);
        for (Pos s = 0; s + len <= window.size() && first + s <= last_start; ++s) {
            const std::size_t id = matcher.match(window.data() + s, len);
            if (id != PrefixMatcher::npos)
                ++counts[id];
        }
    };

    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            threads.emplace_back(count_chunk, w);
    }
    for (unsigned w = 0; w < workers; ++w) {
        for (std::size_t i = 0; i < candidates.size(); ++i)
            result.counts[i] += partial[w][i];
    }
    return result;
}

VerticalPartition partition_prefixes(const BuildConfig& config, BlockReader& reader)
{
    config.validate();
    const Text& text = reader.text();
    const Pos n = text.size();
    const unsigned sigma = text.sigma();
    const Pos max_len = config.resolved_max_prefix_len(n, sigma);

    VerticalPartition out;
    // The suffix "$" is always its own leaf.
    out.direct_leaves.push_back({SymbolString(1, static_cast<char>(kDelimiter)), n});

    std::vector<SymbolString> candidates;
    candidates.reserve(sigma);
    for (unsigned s = 1; s <= sigma; ++s)
        candidates.emplace_back(1, static_cast<char>(s));

    while (!candidates.empty()) {
        ++out.iterations;
        const CountResult counted = count_with_tail(candidates, reader);
        std::vector<SymbolString> next;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const std::uint64_t f = counted.counts[i];
            if (f == 0)
                continue;
            SymbolString& pi = candidates[i];
            if (config.block_size * f <= config.memory_budget) {
                out.prefixes.push_back({std::move(pi), f});
                continue;
            }
            if (pi.size() >= max_len)
                throw SkewedInputError(pi, f);
            if (i == counted.tail) {
                SymbolString leaf = pi;
                leaf.push_back(static_cast<char>(kDelimiter));
                out.direct_leaves.push_back({std::move(leaf), n - pi.size()});
            }
            for (unsigned s = 1; s <= sigma; ++s) {
                next.push_back(pi);
                next.back().push_back(static_cast<char>(s));
            }
        }
        candidates = std::move(next);
    }

    std::sort(out.prefixes.begin(), out.prefixes.end(),
              [](const PrefixEntry& a, const PrefixEntry& b) { return a.prefix < b.prefix; });
    std::sort(out.direct_leaves.begin(), out.direct_leaves.end(),
              [](const DirectLeaf& a, const DirectLeaf& b) { return a.prefix < b.prefix; });
    return out;
}

std::vector<std::vector<std::size_t>> first_fit_decreasing(std::span<const std::uint64_t> sizes,
                                                           std::uint64_t capacity)
{
    const std::size_t count = sizes.size();
    for (std::size_t i = 0; i < count; ++i) {
        if (sizes[i] > capacity)
            throw InvariantError("item larger than bin capacity");
        if (i > 0 && sizes[i] > sizes[i - 1])
            throw InvariantError("first_fit_decreasing expects non-increasing sizes");
    }

    // next_alive[i]: smallest remaining index >= i (count when none), with
    // path compression. Because sizes are non-increasing, the entries that fit
    // a residual r form a suffix of the order, so "next entry in order that
    // fits" is the first remaining index at or after max(cursor, first index
    // with size <= r). Equivalent to the one-pass-per-bin loop, without the
    // quadratic rescans.
    std::vector<std::size_t> next_alive(count + 1);
    std::iota(next_alive.begin(), next_alive.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        std::size_t root = i;
        while (next_alive[root] != root)
            root = next_alive[root];
        while (next_alive[i] != root) {
            const std::size_t up = next_alive[i];
            next_alive[i] = root;
            i = up;
        }
        return root;
    };
    auto remove = [&](std::size_t i) { next_alive[i] = i + 1; };

    std::vector<std::vector<std::size_t>> bins;
    for (std::size_t head = find(0); head < count; head = find(0)) {
        std::vector<std::size_t> bin{head};
        remove(head);
        std::uint64_t residual = capacity - sizes[head];
        std::size_t cursor = head + 1;
        while (true) {
            // First index whose size fits the residual.
            const auto fits = std::partition_point(
                sizes.begin() + static_cast<std::ptrdiff_t>(cursor), sizes.end(),
                [&](std::uint64_t s) { return s > residual; });
            const std::size_t candidate =
                find(static_cast<std::size_t>(fits - sizes.begin()));
            if (candidate >= count)
                break;
            bin.push_back(candidate);
            remove(candidate);
            residual -= sizes[candidate];
            cursor = candidate + 1;
        }
        bins.push_back(std::move(bin));
    }
    return bins;
}

std::vector<VirtualTree> pack_virtual_trees(std::vector<PrefixEntry> entries,
                                            const BuildConfig& config)
{
    config.validate();
    std::sort(entries.begin(), entries.end(), [](const PrefixEntry& a, const PrefixEntry& b) {
        if (a.frequency != b.frequency)
            return a.frequency > b.frequency;
        return a.prefix < b.prefix;
    });
    std::vector<std::uint64_t> sizes(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        sizes[i] = entries[i].frequency;

    std::vector<VirtualTree> trees;
    for (const auto& bin : first_fit_decreasing(sizes, config.capacity())) {
        VirtualTree tree;
        for (std::size_t i : bin) {
            tree.load += entries[i].frequency;
            tree.members.push_back(std::move(entries[i]));
        }
        trees.push_back(std::move(tree));
    }
    return trees;
}

} // namespace era
