#include "era/build.hpp"
#include "era/errors.hpp"
#include "era/index.hpp"
#include "era/oracle.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace era {
namespace {

BuildConfig small_config(Pos m, Pos b, unsigned p = 1)
{
    BuildConfig c;
    c.memory_budget = m;
    c.block_size = b;
    c.workers = p;
    return c;
}

TEST(BuildIndex, BananaLayout)
{
    MemoryStore store;
    const Text t = test::banana();
    const BuildReport r = build_index(t, small_config(16, 2), store);
    const auto names = store.names();
    EXPECT_NE(std::ranges::find(names, std::string(index_files::kManifest)), names.end());
    EXPECT_NE(std::ranges::find(names, std::string(index_files::kTopTrie)), names.end());
    EXPECT_NE(std::ranges::find(names, std::string(index_files::kStats)), names.end());
    EXPECT_GE(std::ranges::count_if(names, [](const std::string& n) { return n.starts_with("st_"); }), 1);
    EXPECT_EQ(r.text_size, 7u);
    EXPECT_EQ(r.vertical.full_scans, r.vertical_iterations);
    const Manifest m = parse_manifest(*store.get(std::string(index_files::kManifest)));
    for (const char* key : {"version", "n", "sigma", "m", "b", "p", "text_digest", "vtree_count"})
        EXPECT_TRUE(m.contains(key)) << key;
    EXPECT_EQ(m.at("m"), "16");
    EXPECT_EQ(m.at("b"), "2");
}

TEST(BuildIndex, StatsCsv)
{
    MemoryStore store;
    const BuildReport r = build_index(generate_random_text(2000, 4, 1), small_config(128, 4, 3), store);
    const std::string csv = *store.get(std::string(index_files::kStats));
    EXPECT_TRUE(csv.starts_with("phase,worker,blocks_read,blocks_written,full_scans,range_reads\n"));
    EXPECT_EQ(csv, r.stats_csv());
    EXPECT_NE(csv.find("\nhorizontal,2,"), std::string::npos);
    EXPECT_GT(r.serialize_total().blocks_written, 0u);
}

TEST(BuildIndex, RebuildIsByteIdentical)
{
    const Text t = generate_random_text(3000, 4, 2);
    MemoryStore a, b;
    build_index(t, small_config(128, 4), a);
    build_index(t, small_config(128, 4), b);
    ASSERT_EQ(a.names(), b.names());
    for (const auto& n : a.names())
        EXPECT_EQ(a.get(n), b.get(n)) << n;
}

TEST(BuildIndex, DigestIndependentOfWorkers)
{
    const Text t = generate_random_text(6000, 4, 5);
    std::string first;
    std::optional<IoStats> first_reads;
    for (unsigned p : {1u, 2u, 4u, 8u}) {
        MemoryStore store;
        const auto r = build_index(t, small_config(256, 8, p), store);
        const std::string d = index_digest(store);
        if (first.empty()) {
            first = d;
            first_reads = r.horizontal_total();
        }
        EXPECT_EQ(d, first) << "p=" << p;
        EXPECT_EQ(r.horizontal_total().blocks_read, first_reads->blocks_read) << "p=" << p;
    }
}

TEST(BuildIndex, DoubledTextIsSkewedSingleCopyIsNot)
{
    const Text unit = generate_random_text(2048, 4, 3);
    std::vector<Symbol> body(unit.symbols().begin(), unit.symbols().end() - 1);
    std::vector<Symbol> twice = body;
    twice.insert(twice.end(), body.begin(), body.end());
    const BuildConfig c = small_config(1024, 16);
    MemoryStore ok;
    EXPECT_NO_THROW(build_index(unit, c, ok));
    MemoryStore bad;
    const Text doubled = Text::from_symbols(twice, 4);
    try {
        build_index(doubled, c, bad);
        FAIL() << "expected SkewedInputError";
    } catch (const SkewedInputError& e) {
        EXPECT_GT(e.prefix().size(), c.resolved_max_prefix_len(doubled.size(), 4));
        EXPECT_GE(e.frequency(), 2u);
    }
}

TEST(BuildIndex, CheckInvariantsRuns)
{
    BuildConfig c = small_config(64, 2, 2);
    c.check_invariants = true;
    MemoryStore store;
    const Text t = generate_random_text(1500, 3, 6);
    build_index(t, c, store);
    const auto opened = Index::open(store);
    std::vector<Pos> leaves;
    opened.index->for_each_leaf([&](Pos p, Pos) { leaves.push_back(p); });
    EXPECT_EQ(leaves, oracle::naive_suffix_array(t));
}

TEST(BuildIndex, RejectsBadConfig)
{
    MemoryStore store;
    EXPECT_THROW(build_index(test::banana(), small_config(3, 2), store), ConfigError);
}

} // namespace
} // namespace era
