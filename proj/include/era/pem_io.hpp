#pragma once

#include "era/text.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace era {

enum class Phase : std::uint8_t { vertical, horizontal, serialize };

std::string_view to_string(Phase phase) noexcept;

// Block-transfer counters for one (phase, worker). Counters only grow.
struct IoStats {
    Phase phase = Phase::vertical;
    unsigned worker = 0;
    std::uint64_t blocks_read = 0;
    std::uint64_t blocks_written = 0;
    std::uint64_t full_scans = 0;
    std::uint64_t range_reads = 0;

    // Adds the counters of `other`; phase and worker are left alone.
    IoStats& operator+=(const IoStats& other) noexcept;
    bool operator==(const IoStats&) const = default;
};

// Charges ceil(bytes / block_size) block writes.
void charge_write(IoStats& stats, std::uint64_t bytes, Pos block_size) noexcept;

// Reads the text in blocks of B symbols and charges every transfer to an
// IoStats. Exactly one block is resident at a time; touching any other block
// costs one transfer. Not thread-safe: each worker owns its reader.
class BlockReader {
public:
    BlockReader(const Text& text, Pos block_size, IoStats& stats) noexcept
        : text_(&text), block_size_(block_size), stats_(&stats)
    {
    }

    const Text& text() const noexcept { return *text_; }
    Pos block_size() const noexcept { return block_size_; }
    IoStats& stats() noexcept { return *stats_; }

    // One sequential pass over S. visit(first_pos, block) is called once per
    // block in order, first_pos being the 1-based position of block[0].
    // Charges exactly ceil(N/B) reads and one full scan.
    template <typename BlockVisitor>
    void scan_blocks(BlockVisitor&& visit)
    {
        const auto symbols = text_->symbols();
        const Pos n = symbols.size();
        ++stats_->full_scans;
        for (Pos first = 0; first < n; first += block_size_) {
            const Pos len = n - first < block_size_ ? n - first : block_size_;
            ++stats_->blocks_read;
            resident_ = first / block_size_;
            visit(first + 1, symbols.subspan(first, len));
        }
    }

    // Per-symbol variant of scan_blocks: visit(pos, symbol).
    template <typename Visitor>
    void scan(Visitor&& visit)
    {
        scan_blocks([&](Pos first, std::span<const Symbol> block) {
            for (std::size_t i = 0; i < block.size(); ++i)
                visit(first + i, block[i]);
        });
    }

    // Up to `len` symbols starting at 1-based `start`, truncated at the text
    // end. Throws RangeError unless 1 <= start <= N.
    std::span<const Symbol> read_range(Pos start, Pos len);

    // Forgets the resident block; the next access is always a transfer.
    void invalidate() noexcept { resident_.reset(); }

private:
    const Text* text_;
    Pos block_size_;
    IoStats* stats_;
    std::optional<Pos> resident_;
};

} // namespace era
