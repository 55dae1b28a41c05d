#pragma once

#include "era/config.hpp"
#include "era/pem_io.hpp"

#include <span>
#include <string>
#include <vector>

namespace era::bench {

struct GridRow {
    Pos n = 0;
    unsigned sigma = 0;
    std::uint64_t seed = 0;
    Phase phase = Phase::vertical;
    unsigned p = 0;
    double wall_ms = 0;
    std::uint64_t blocks_read = 0;
    std::uint64_t blocks_written = 0;
    std::uint64_t full_scans = 0;
    std::size_t vtree_count = 0;
    double cnt1_ms = 0;
    double cnt_star_ms = 0;
    bool skewed = false;
};

inline constexpr std::string_view kGridHeader =
    "n,sigma,seed,phase,p,wall_ms,blocks_read,blocks_written,full_scans,vtree_count,"
    "cnt1_ms,cnt_star_ms,skewed_flag";
std::string to_csv(const GridRow& row);

// One vertical and one horizontal row per (n, sigma, seed), built over
// uniformly random text. Subtree files are hashed, not kept. Points run one
// after another. A SkewedInputError yields two flagged rows.
std::vector<GridRow> run_grid(std::span<const Pos> n_values, std::span<const unsigned> sigma_values,
                              const BuildConfig& config, std::span<const std::uint64_t> seeds);

struct ScalingRow {
    Pos n = 0;
    unsigned sigma = 0;
    std::uint64_t seed = 0;
    unsigned p = 0;
    double horizontal_ms = 0;
    double speedup = 0;  // relative to the first p value
    std::uint64_t blocks_read = 0;
    std::string digest;
};

inline constexpr std::string_view kScalingHeader =
    "n,sigma,seed,p,horizontal_ms,speedup,blocks_read,index_digest";
std::string to_csv(const ScalingRow& row);

// Same input built once per worker count.
std::vector<ScalingRow> run_worker_scaling(Pos n, unsigned sigma, std::span<const unsigned> p_values,
                                           const BuildConfig& config, std::uint64_t seed);

} // namespace era::bench
