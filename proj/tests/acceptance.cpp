// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference values come from the brute-force oracles or from
// independent computations in this file.

#include "era/build.hpp"
#include "era/errors.hpp"
#include "era/index.hpp"
#include "era/oracle.hpp"
#include "era/subtree.hpp"
#include "era/vertical.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace era;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass)
            detail = why;
        pass = false;
    }
};

double log_base(double x, double base) { return std::log(x) / std::log(base); }

BuildConfig make_config(Pos m, Pos b, unsigned p)
{
    BuildConfig c;
    c.memory_budget = m;
    c.block_size = b;
    c.workers = p;
    return c;
}

std::vector<Symbol> body_of(const Text& t)
{
    return {t.symbols().begin(), t.symbols().end() - 1};
}

// ---------------------------------------------------------------- 1 and 8

struct CorpusCounts {
    std::uint64_t texts = 0;
    std::uint64_t subtrees = 0;
};

// Adjacent-leaf LCPs read off a subtree: the string depth of the node at
// which the walk turns from one leaf to the next.
void leaf_lcps(const SuffixSubtree& tree, std::vector<Pos>& out)
{
    std::function<void(std::uint32_t, Pos)> walk = [&](std::uint32_t id, Pos parent) {
        const auto& node = tree.nodes[id];
        const Pos depth = parent + node.edge_len;
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            if (i > 0)
                out.push_back(depth);
            walk(node.children[i], depth);
        }
    };
    walk(SuffixSubtree::kRoot, 0);
}

// Checks one built index against the oracles; returns an empty string when
// everything holds.
std::string check_index(const Text& text, const MemoryStore& store, CorpusCounts& counts)
{
    unsigned sigma = 0;
    const Index index(text, TopTrie::deserialize(*store.get(std::string(index_files::kTopTrie)), &sigma),
                      store);
    const auto sa = oracle::naive_suffix_array(text);
    const auto lcp = oracle::naive_lcp(text, sa);
    std::vector<Pos> rank(text.size() + 1);
    for (std::size_t r = 0; r < sa.size(); ++r)
        rank[sa[r]] = r;

    std::vector<Pos> leaves;
    index.for_each_leaf([&](Pos pos, Pos) { leaves.push_back(pos); });
    if (leaves != sa)
        return "in-order leaves differ from the suffix array";

    std::string problem;
    index.for_each_subtree([&](const TopTrie::Leaf& leaf, const SuffixSubtree* tree) {
        if (!problem.empty() || !tree)
            return;
        ++counts.subtrees;
        const std::uint64_t f = oracle::naive_count(text, leaf.prefix);
        if (const auto why = check_subtree(*tree, text); !why.empty()) {
            problem = leaf.file_name + ": " + why;
            return;
        }
        for (const auto& node : tree->nodes) {
            if (!node.leaf_pos && node.children.size() < 2 && &node != &tree->nodes[0]) {
                problem = leaf.file_name + ": internal node with one child";
                return;
            }
            for (std::size_t i = 1; i < node.children.size(); ++i) {
                const auto& a = tree->nodes[node.children[i - 1]];
                const auto& b = tree->nodes[node.children[i]];
                if (text.at(a.edge_start) >= text.at(b.edge_start)) {
                    problem = leaf.file_name + ": children out of order";
                    return;
                }
            }
        }
        if (tree->leaf_count() != f) {
            problem = leaf.file_name + ": leaf count differs from f(pi)";
            return;
        }
        if (tree->nodes.size() > 2 * f) {
            problem = leaf.file_name + ": more than 2 f(pi) nodes";
            return;
        }
        const std::string blob = *store.get(leaf.file_name);
        const SuffixSubtree back = deserialize_subtree(blob);
        if (!(back == *tree) || encode_subtree(back) != blob) {
            problem = leaf.file_name + ": serialization round trip differs";
            return;
        }
        // Per-prefix LCP depths against the pairwise brute-force values.
        const auto in_order = tree->leaves_in_order();
        std::vector<Pos> depths;
        leaf_lcps(*tree, depths);
        for (std::size_t i = 0; i + 1 < in_order.size(); ++i) {
            const Pos r = rank[in_order[i]];
            if (rank[in_order[i + 1]] != r + 1 || depths[i] != lcp[r]) {
                problem = leaf.file_name + ": lcp depth differs";
                return;
            }
        }
    });
    return problem;
}

Outcome criterion_1_and_8(CorpusCounts& counts)
{
    Outcome out;
    // Configurations cycled over the corpus: (M, B, p).
    const std::vector<std::tuple<Pos, Pos, unsigned>> configs{
        {2, 1, 1}, {4, 2, 1}, {8, 1, 2}, {8, 4, 1}, {16, 2, 3}};
    std::size_t k = 0;
    auto run_one = [&](const Text& text, const BuildConfig& config) {
        MemoryStore store;
        build_index(text, config, store);
        ++counts.texts;
        const std::string why = check_index(text, store, counts);
        if (!why.empty()) {
            std::ostringstream msg;
            msg << "N=" << text.size() << " sigma=" << text.sigma() << " M=" << config.memory_budget
                << " B=" << config.block_size << ": " << why;
            out.fail(msg.str());
        }
    };

    // Exhaustive: every body of at most 10 symbols (so N <= 11) over
    // sigma 2 and 3.
    for (unsigned sigma = 2; sigma <= 3 && out.pass; ++sigma) {
        std::vector<std::vector<Symbol>> layer{{}};
        for (unsigned len = 0; len <= 10 && out.pass; ++len) {
            std::vector<std::vector<Symbol>> next;
            for (const auto& body : layer) {
                const auto [m, b, p] = configs[k++ % configs.size()];
                run_one(Text::from_symbols(body, sigma), make_config(m, b, p));
                if (!out.pass)
                    break;
                for (unsigned s = 1; s <= sigma && len < 10; ++s) {
                    auto longer = body;
                    longer.push_back(static_cast<Symbol>(s));
                    next.push_back(std::move(longer));
                }
            }
            layer = std::move(next);
        }
    }

    // Random: 510 texts, N in [64, 4096], sigma in {2, 4, 16}.
    std::mt19937_64 rng(20240601);
    const std::vector<unsigned> sigmas{2, 4, 16};
    for (int i = 0; i < 510 && out.pass; ++i) {
        const Pos n = std::uniform_int_distribution<Pos>(64, 4096)(rng);
        const unsigned sigma = sigmas[i % 3];
        const Pos b = Pos{1} << std::uniform_int_distribution<int>(0, 3)(rng);
        const Pos cap = Pos{4} << std::uniform_int_distribution<int>(0, 5)(rng);
        const unsigned p = 1 + i % 4;
        run_one(generate_random_text(n, sigma, 1000 + i), make_config(b * cap, b, p));
    }
    if (out.pass) {
        out.detail = std::to_string(counts.texts) + " texts, " + std::to_string(counts.subtrees) +
                     " subtrees";
    }
    return out;
}

// ---------------------------------------------------------------- 2

Outcome criterion_2()
{
    Outcome out;
    std::ostringstream detail;
    int cells = 0;
    for (int lg : {18, 20, 22}) {
        const Pos n = Pos{1} << lg;
        for (unsigned sigma : {2u, 4u, 16u}) {
            const Text text = generate_random_text(n, sigma, 70 + lg + sigma);
            for (Pos ratio : {Pos{1} << 6, Pos{1} << 10}) {
                const BuildConfig c = make_config(64 * ratio, 64, 1);
                IoStats stats;
                BlockReader reader(text, c.block_size, stats);
                partition_prefixes(c, reader);
                const double expected =
                    std::ceil(log_base(static_cast<double>(n) / static_cast<double>(ratio), sigma) - 1e-9);
                const double got = static_cast<double>(stats.full_scans);
                ++cells;
                if (std::abs(got - expected) > 1) {
                    std::ostringstream msg;
                    msg << "N=2^" << lg << " sigma=" << sigma << " M/B=" << ratio << ": " << got
                        << " scans, expected " << expected << " +- 1";
                    out.fail(msg.str());
                }
            }
        }
    }
    if (out.pass)
        out.detail = std::to_string(cells) + " grid cells within +-1";
    return out;
}

// ---------------------------------------------------------------- 3

// Fewest bins for `sizes` by dynamic programming over subsets: for every
// subset, the least (bins, load of the open bin) pair.
std::size_t optimal_bins(const std::vector<std::uint64_t>& sizes, std::uint64_t cap)
{
    const std::size_t n = sizes.size();
    if (n == 0)
        return 0;
    const std::uint32_t full = (1u << n) - 1;
    std::vector<std::pair<std::size_t, std::uint64_t>> best(full + 1, {n + 1, 0});
    best[0] = {1, 0};
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        if (best[mask].first > n)
            continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i))
                continue;
            auto [bins, load] = best[mask];
            if (load + sizes[i] <= cap) {
                load += sizes[i];
            } else {
                ++bins;
                load = sizes[i];
            }
            auto& slot = best[mask | (1u << i)];
            if (std::pair(bins, load) < slot)
                slot = {bins, load};
        }
    }
    return best[full].first;
}

Outcome criterion_3()
{
    Outcome out;
    std::mt19937_64 rng(3);
    std::size_t exhaustive = 0;
    for (int round = 0; round < 10000 && out.pass; ++round) {
        const Pos b = 1 + round % 4;
        const Pos cap = std::uniform_int_distribution<Pos>(1, 100)(rng);
        const BuildConfig c = make_config(std::max<Pos>(2 * b, cap * b), b, 1);
        const std::size_t items = round % 2 ? std::uniform_int_distribution<std::size_t>(1, 12)(rng)
                                            : std::uniform_int_distribution<std::size_t>(1, 200)(rng);
        std::vector<PrefixEntry> entries;
        std::vector<std::uint64_t> sizes;
        for (std::size_t i = 0; i < items; ++i) {
            const auto f = std::uniform_int_distribution<std::uint64_t>(1, c.capacity())(rng);
            // Distinct prefixes of equal length keep the set prefix-free.
            SymbolString prefix;
            for (std::size_t x = i + 1; x; x /= 200)
                prefix += static_cast<char>(1 + x % 200);
            prefix.resize(3, '\x01');
            entries.push_back({prefix, f});
            sizes.push_back(f);
        }
        const auto vtrees = pack_virtual_trees(entries, c);
        std::vector<std::uint64_t> packed;
        for (const auto& v : vtrees) {
            std::uint64_t load = 0;
            for (const auto& m : v.members) {
                load += m.frequency;
                packed.push_back(m.frequency);
            }
            if (load > c.capacity() || load != v.load || v.members.empty())
                out.fail("bin over capacity or load mismatch in round " + std::to_string(round));
        }
        std::sort(packed.begin(), packed.end());
        std::sort(sizes.begin(), sizes.end());
        if (packed != sizes)
            out.fail("multiset changed in round " + std::to_string(round));
        if (items <= 12) {
            ++exhaustive;
            const std::size_t opt = optimal_bins(sizes, c.capacity());
            if (vtrees.size() > 2 * opt)
                out.fail("round " + std::to_string(round) + ": " + std::to_string(vtrees.size()) +
                         " bins vs optimum " + std::to_string(opt));
        }
    }
    if (out.pass)
        out.detail = "10000 instances, " + std::to_string(exhaustive) + " against the exact optimum";
    return out;
}

// ---------------------------------------------------------------- 4

Outcome criterion_4()
{
    Outcome out;
    std::uint64_t total = 0, within = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Text text = generate_random_text(Pos{1} << 20, 4, 400 + seed);
        DigestStore store;
        const BuildReport r = build_index(text, make_config(Pos{1} << 18, 64, 1), store);
        for (const auto& m : r.subtrees) {
            ++total;
            const double logn = log_base(static_cast<double>(m.occurrences), 4);
            const double bound = std::ceil(logn / static_cast<double>(std::max<Pos>(1, m.initial_range))) + 1;
            if (static_cast<double>(m.iterations) <= bound)
                ++within;
        }
    }
    const double share = total ? static_cast<double>(within) / static_cast<double>(total) : 0;
    std::ostringstream detail;
    detail << within << " of " << total << " subtrees within the bound (" << 100 * share << "%)";
    out.detail = detail.str();
    out.pass = total > 0 && share >= 0.95;
    return out;
}

// ---------------------------------------------------------------- 5

Outcome criterion_5()
{
    Outcome out;
    std::vector<std::uint64_t> reads;
    std::ostringstream detail;
    for (unsigned sigma : {2u, 16u, 64u}) {
        const Text text = generate_random_text(Pos{1} << 24, sigma, 5);
        const BuildConfig c = make_config(Pos{64} << 10, 64, 1);
        IoStats stats;
        BlockReader reader(text, c.block_size, stats);
        partition_prefixes(c, reader);
        reads.push_back(stats.blocks_read);
        detail << (reads.size() > 1 ? ", " : "") << "sigma=" << sigma << ": " << stats.blocks_read;
    }
    out.detail = detail.str();
    out.pass = reads[0] > reads[1] && reads[1] > reads[2];
    return out;
}

// ---------------------------------------------------------------- 6

Outcome criterion_6()
{
    Outcome out;
    const std::vector<std::pair<Pos, unsigned>> inputs{
        {1 << 16, 2}, {1 << 16, 4}, {1 << 15, 16}, {50000, 64}, {1 << 17, 4}};
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto [n, sigma] = inputs[i];
        const Text text = generate_random_text(n, sigma, 600 + i);
        std::string first;
        for (unsigned p : {1u, 2u, 4u, 8u}) {
            DigestStore store;
            build_index(text, make_config(1 << 12, 32, p), store);
            const std::string d = index_digest(store);
            if (first.empty())
                first = d;
            else if (d != first)
                out.fail("input " + std::to_string(i) + ": digest differs at p=" + std::to_string(p));
        }
    }
    if (out.pass)
        out.detail = "5 inputs x p in {1,2,4,8}";
    return out;
}

// ---------------------------------------------------------------- 7

Outcome criterion_7()
{
    Outcome out;
    const Text unit = generate_random_text(1 << 14, 4, 77);
    const auto body = body_of(unit);
    std::vector<Symbol> twice = body;
    twice.insert(twice.end(), body.begin(), body.end());
    const Text doubled = Text::from_symbols(twice, 4);
    const BuildConfig c = make_config(1 << 12, 32, 2);
    const Pos threshold = c.resolved_max_prefix_len(doubled.size(), 4);
    try {
        DigestStore store;
        build_index(unit, c, store);
    } catch (const std::exception& e) {
        out.fail(std::string("single copy failed: ") + e.what());
        return out;
    }
    try {
        DigestStore store;
        build_index(doubled, c, store);
        out.fail("doubled text built without SkewedInputError");
    } catch (const SkewedInputError& e) {
        const std::uint64_t f = oracle::naive_count(doubled, e.prefix());
        std::ostringstream detail;
        detail << "prefix length " << e.prefix().size() << " > threshold " << threshold
               << ", occurs " << f << " times";
        out.detail = detail.str();
        if (e.prefix().size() <= threshold || f < 2)
            out.fail(detail.str());
    }
    return out;
}

// ---------------------------------------------------------------- 9

Outcome criterion_9()
{
    Outcome out;
    const std::vector<std::pair<Pos, unsigned>> texts{{4096, 2}, {4096, 4}, {4096, 16}, {1 << 16, 4}, {20000, 64}};
    std::uint64_t checked = 0;
    for (std::size_t i = 0; i < texts.size() && out.pass; ++i) {
        const auto [n, sigma] = texts[i];
        const Text text = generate_random_text(n, sigma, 900 + i);
        MemoryStore store;
        build_index(text, make_config(1 << 10, 16, 2), store);
        const auto opened = Index::open(store);
        const Index& index = *opened.index;
        std::mt19937_64 rng(i);
        auto uniform = [&](Pos lo, Pos hi) { return std::uniform_int_distribution<Pos>(lo, hi)(rng); };
        auto random_tail = [&](SymbolString s, Pos len) {
            while (s.size() < len)
                s += static_cast<char>(uniform(1, sigma));
            return s;
        };
        for (int q = 0; q < 1000 && out.pass; ++q) {
            SymbolString p;
            const Pos len = uniform(1, 24);
            const Pos pos = uniform(1, n - 1);
            switch (q % 4) {
            case 0:  // present
                p = std::string(text.substr(pos, std::min(len, n - pos)));
                break;
            case 1:  // random, mostly absent for longer lengths
                p = random_tail({}, len);
                break;
            case 2:  // present head running into a random tail
                p = random_tail(std::string(text.substr(pos, std::min(len, n - pos))), len + uniform(1, 4));
                break;
            default:  // ends exactly at the last symbol before the delimiter
                p = std::string(text.substr(n - std::min(len, n - 1), std::min(len, n - 1)));
                break;
            }
            ++checked;
            const auto where = oracle::naive_search(text, p);
            const auto [length, witness] = oracle::naive_longest_prefix(text, p);
            const auto got = index.longest_prefix(p);
            const bool witness_ok =
                got.witness.has_value() == witness.has_value() &&
                (!got.witness || text.substr(*got.witness, length) == std::string_view(p).substr(0, length));
            if (index.locate(p) != where || index.exists(p) != !where.empty() || got.length != length ||
                !witness_ok)
                out.fail("text " + std::to_string(i) + " query " + std::to_string(q) + " disagrees");
        }
    }
    if (out.pass)
        out.detail = std::to_string(checked) + " queries over " + std::to_string(texts.size()) + " texts";
    return out;
}

// ---------------------------------------------------------------- 10

Outcome criterion_10()
{
    Outcome out;
    const Pos n = 1 << 16;
    const double logn = log_base(static_cast<double>(n), 4);
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Text text = generate_random_text(n, 4, 1000 + seed);
        MemoryStore store;
        build_index(text, make_config(1 << 12, 32, 1), store);
        const auto opened = Index::open(store);
        Pos deepest = 0;
        opened.index->for_each_leaf([&](Pos, Pos depth) { deepest = std::max(deepest, depth); });
        // The deepest leaf sits one symbol below the longest repeat.
        const auto lrs = oracle::longest_repeated_substring(text);
        if (deepest != lrs.length + 1) {
            out.fail("seed " + std::to_string(seed) + ": max leaf depth " + std::to_string(deepest) +
                     " but longest repeat " + std::to_string(lrs.length));
            return out;
        }
        sum += static_cast<double>(deepest);
    }
    const double mean = sum / 20;
    std::ostringstream detail;
    detail << "mean max leaf depth " << mean << " in [" << logn << ", " << 3 * logn << "]";
    out.detail = detail.str();
    out.pass = mean >= logn && mean <= 3 * logn;
    return out;
}

} // namespace

int main()
{
    using clock = std::chrono::steady_clock;
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    CorpusCounts corpus;
    Outcome structural;
    const std::vector<Criterion> criteria{
        {1, "oracle equivalence", 300,
         [&] {
             structural = criterion_1_and_8(corpus);
             return structural;
         }},
        {2, "vertical scan count", 600, criterion_2},
        {3, "first-fit decreasing packing", 60, criterion_3},
        {4, "horizontal iteration bound", 300, criterion_4},
        {5, "blocks read fall with sigma", 300, criterion_5},
        {6, "digest independent of p", 300, criterion_6},
        {7, "skewed input detection", 60, criterion_7},
        {8, "subtree structure", 300, [&] { return structural; }},
        {9, "query equivalence", 120, criterion_9},
        {10, "expected height", 120, criterion_10},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(clock::now() - start).count();
        if (secs > c.limit_s)
            o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_s) + " s");
        failures += o.pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
