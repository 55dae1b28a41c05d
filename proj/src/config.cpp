#include "era/config.hpp"

#include "era/errors.hpp"

#include <bit>
#include <string>

namespace era {

void BuildConfig::validate() const
{
    if (block_size < 1)
        throw ConfigError("block size B must be at least 1");
    if (memory_budget < 2 * block_size)
        throw ConfigError("memory budget M=" + std::to_string(memory_budget) +
                          " must be at least 2*B=" + std::to_string(2 * block_size));
    if (workers < 1)
        throw ConfigError("worker count p must be at least 1");
    if (max_prefix_len && *max_prefix_len < 1)
        throw ConfigError("max_prefix_len must be at least 1");
}

Pos BuildConfig::resolved_max_prefix_len(Pos text_size, unsigned sigma) const
{
    if (max_prefix_len)
        return *max_prefix_len;
    const unsigned levels = ceil_log(text_size, sigma);
    return 8 * Pos{levels < 1 ? 1u : levels};
}

bool BuildConfig::block_holds_node(Pos text_size) const noexcept
{
    const Pos lg = text_size <= 1 ? 0 : std::bit_width(text_size - 1);
    return block_size >= 2 * lg;
}

unsigned ceil_log(Pos value, unsigned base) noexcept
{
    unsigned k = 0;
    Pos power = 1;
    while (power < value) {
        if (power > value / base) {
            ++k;
            break;
        }
        power *= base;
        ++k;
    }
    return k;
}

} // namespace era
