#include "era/bench.hpp"

#include "era/build.hpp"
#include "era/errors.hpp"
#include "era/index.hpp"
#include "era/text.hpp"

#include <iomanip>
#include <sstream>

namespace era::bench {

namespace {

std::string ms(double v)
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::fixed << std::setprecision(3) << v;
    return out.str();
}

} // namespace

std::string to_csv(const GridRow& r)
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << r.n << ',' << r.sigma << ',' << r.seed << ',' << to_string(r.phase) << ',' << r.p << ','
        << ms(r.wall_ms) << ',' << r.blocks_read << ',' << r.blocks_written << ',' << r.full_scans
        << ',' << r.vtree_count << ',' << ms(r.cnt1_ms) << ',' << ms(r.cnt_star_ms) << ','
        << (r.skewed ? 1 : 0);
    return out.str();
}

std::string to_csv(const ScalingRow& r)
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << r.n << ',' << r.sigma << ',' << r.seed << ',' << r.p << ',' << ms(r.horizontal_ms) << ','
        << std::fixed << std::setprecision(3) << r.speedup << ',' << r.blocks_read << ','
        << r.digest;
    return out.str();
}

std::vector<GridRow> run_grid(std::span<const Pos> n_values, std::span<const unsigned> sigma_values,
                              const BuildConfig& config, std::span<const std::uint64_t> seeds)
{
    config.validate();
    std::vector<GridRow> rows;
    for (Pos n : n_values) {
        for (unsigned sigma : sigma_values) {
            if (n < sigma)
                throw ConfigError("grid point with N < sigma");
            for (std::uint64_t seed : seeds) {
                const Text text = generate_random_text(n, sigma, seed);
                GridRow vertical{n, sigma, seed, Phase::vertical, config.workers};
                GridRow horizontal{n, sigma, seed, Phase::horizontal, config.workers};
                try {
                    DigestStore store;
                    const BuildReport report = build_index(text, config, store);
                    vertical.wall_ms = report.vertical_ms;
                    vertical.blocks_read = report.vertical.blocks_read;
                    vertical.full_scans = report.vertical.full_scans;
                    vertical.vtree_count = report.vtree_count;

                    const IoStats h = report.horizontal_total();
                    horizontal.wall_ms = report.horizontal_ms;
                    horizontal.blocks_read = h.blocks_read;
                    horizontal.blocks_written = report.serialize_total().blocks_written;
                    horizontal.full_scans = h.full_scans;
                    horizontal.vtree_count = report.vtree_count;
                    horizontal.cnt1_ms = report.times.cnt1_ms;
                    horizontal.cnt_star_ms = report.times.cnt_star_ms;
                } catch (const SkewedInputError&) {
                    vertical.skewed = horizontal.skewed = true;
                }
                rows.push_back(vertical);
                rows.push_back(horizontal);
            }
        }
    }
    return rows;
}

std::vector<ScalingRow> run_worker_scaling(Pos n, unsigned sigma, std::span<const unsigned> p_values,
                                           const BuildConfig& config, std::uint64_t seed)
{
    const Text text = generate_random_text(n, sigma, seed);
    std::vector<ScalingRow> rows;
    for (unsigned p : p_values) {
        BuildConfig cfg = config;
        cfg.workers = p;
        DigestStore store;
        const BuildReport report = build_index(text, cfg, store);
        ScalingRow row;
        row.n = n;
        row.sigma = sigma;
        row.seed = seed;
        row.p = p;
        row.horizontal_ms = report.horizontal_ms;
        row.blocks_read = report.horizontal_total().blocks_read;
        row.digest = index_digest(store);
        row.speedup = rows.empty() || report.horizontal_ms <= 0
                          ? 1.0
                          : rows.front().horizontal_ms / report.horizontal_ms;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace era::bench
