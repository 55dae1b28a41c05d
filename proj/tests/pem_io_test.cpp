#include "era/errors.hpp"
#include "era/pem_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace era {
namespace {

std::uint64_t scan_cost(Pos n, Pos b)
{
    const Text t = generate_random_text(n, 2, 1);
    IoStats stats;
    BlockReader reader(t, b, stats);
    Pos seen = 0;
    reader.scan([&](Pos pos, Symbol) { EXPECT_EQ(pos, ++seen); });
    EXPECT_EQ(seen, n);
    EXPECT_EQ(stats.full_scans, 1u);
    return stats.blocks_read;
}

TEST(BlockReader, ScanChargesCeilNOverB)
{
    EXPECT_EQ(scan_cost(7, 4), 2u);
    EXPECT_EQ(scan_cost(1024, 1), 1024u);
    EXPECT_EQ(scan_cost(12, 12), 1u);
    EXPECT_EQ(scan_cost(13, 12), 2u);
}

TEST(BlockReader, ReadRange)
{
    const Text t = test::banana();
    IoStats stats;
    BlockReader reader(t, 2, stats);
    const auto ana = reader.read_range(2, 3);
    EXPECT_EQ(test::letters(t, std::string_view(reinterpret_cast<const char*>(ana.data()), ana.size())), "ana");
    const auto tail = reader.read_range(6, 5);
    EXPECT_EQ(test::letters(t, std::string_view(reinterpret_cast<const char*>(tail.data()), tail.size())), "a$");
    EXPECT_THROW(reader.read_range(0, 1), RangeError);
    EXPECT_THROW(reader.read_range(8, 1), RangeError);
    EXPECT_EQ(stats.range_reads, 2u);
}

// Replays a random access trace symbol by symbol against a one-block cache
// and compares with the reader's charges.
TEST(BlockReader, ChargesMatchSymbolLevelCacheReplay)
{
    std::mt19937_64 rng(5);
    for (int round = 0; round < 50; ++round) {
        const Pos n = std::uniform_int_distribution<Pos>(1, 300)(rng);
        const Pos b = std::uniform_int_distribution<Pos>(1, 17)(rng);
        const Text t = generate_random_text(n, 3, round);
        IoStats stats;
        BlockReader reader(t, b, stats);
        std::optional<Pos> resident;
        std::uint64_t expected = 0;
        for (int op = 0; op < 40; ++op) {
            const int kind = std::uniform_int_distribution<int>(0, 9)(rng);
            if (kind == 0) {
                reader.scan([](Pos, Symbol) {});
                for (Pos p = 1; p <= n; p += b)
                    ++expected;
                resident = (n - 1) / b;
            } else if (kind == 1) {
                reader.invalidate();
                resident.reset();
            } else {
                const Pos start = std::uniform_int_distribution<Pos>(1, n)(rng);
                const Pos len = std::uniform_int_distribution<Pos>(0, 2 * b + 3)(rng);
                reader.read_range(start, len);
                for (Pos p = start; p < start + len && p <= n; ++p) {
                    const Pos block = (p - 1) / b;
                    if (resident != block) {
                        ++expected;
                        resident = block;
                    }
                }
            }
            ASSERT_EQ(stats.blocks_read, expected) << "n=" << n << " b=" << b << " op=" << op;
        }
        if (stats.full_scans > 0) {
            EXPECT_GE(stats.blocks_read, stats.full_scans * ((n + b - 1) / b));
        }
    }
}

TEST(IoStats, ChargeWriteAndSum)
{
    IoStats a;
    charge_write(a, 0, 4);
    EXPECT_EQ(a.blocks_written, 0u);
    charge_write(a, 9, 4);
    EXPECT_EQ(a.blocks_written, 3u);
    IoStats b;
    b.blocks_read = 5;
    b.full_scans = 1;
    a += b;
    EXPECT_EQ(a.blocks_read, 5u);
    EXPECT_EQ(a.blocks_written, 3u);
    EXPECT_EQ(a.full_scans, 1u);
    EXPECT_EQ(to_string(Phase::horizontal), "horizontal");
}

} // namespace
} // namespace era
