#include "era/pem_io.hpp"

#include "era/errors.hpp"

#include <string>

namespace era {

std::string_view to_string(Phase phase) noexcept
{
    switch (phase) {
    case Phase::vertical:
        return "vertical";
    case Phase::horizontal:
        return "horizontal";
    case Phase::serialize:
        return "serialize";
    }
    return "unknown";
}

IoStats& IoStats::operator+=(const IoStats& other) noexcept
{
    blocks_read += other.blocks_read;
    blocks_written += other.blocks_written;
    full_scans += other.full_scans;
    range_reads += other.range_reads;
    return *this;
}

void charge_write(IoStats& stats, std::uint64_t bytes, Pos block_size) noexcept
{
    stats.blocks_written += (bytes + block_size - 1) / block_size;
}

std::span<const Symbol> BlockReader::read_range(Pos start, Pos len)
{
    const Pos n = text_->size();
    if (start < 1 || start > n)
        throw RangeError("read_range start " + std::to_string(start) + " outside 1.." +
                         std::to_string(n));
    ++stats_->range_reads;
    const Pos avail = n - start + 1;
    if (len > avail)
        len = avail;
    if (len == 0)
        return {};

    const Pos first_block = (start - 1) / block_size_;
    const Pos last_block = (start - 1 + len - 1) / block_size_;
    Pos misses = last_block - first_block + 1;
    if (resident_ && *resident_ == first_block)
        --misses;
    stats_->blocks_read += misses;
    resident_ = last_block;
    return text_->symbols().subspan(start - 1, len);
}

} // namespace era
