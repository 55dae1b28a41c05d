#include "era/horizontal.hpp"

#include "era/errors.hpp"
#include "era/prefix_matcher.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>
#include <unordered_map>

namespace era {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

constexpr std::uint32_t kDone = std::numeric_limits<std::uint32_t>::max();

// Multikey quicksort of slots by their buffer rows on symbols
// [depth, limit). Keys past the end of a short row are -1, below every
// symbol.
class RowSorter {
public:
    RowSorter(const std::vector<Symbol>& buf, const std::vector<Pos>& lens,
              const std::vector<std::uint32_t>& row_of_slot, Pos stride, Pos limit)
        : buf_(buf.data()), lens_(lens.data()), row_of_slot_(row_of_slot.data()),
          stride_(stride), limit_(limit)
    {
    }

    void sort(std::uint32_t* rows, std::size_t count, Pos depth) const
    {
        while (count > 1) {
            if (depth >= limit_)
                return;
            if (count < 12) {
                insertion(rows, count, depth);
                return;
            }
            const int pivot =
                median(key(rows[0], depth), key(rows[count / 2], depth), key(rows[count - 1], depth));
            std::size_t lt = 0, i = 0, gt = count;
            while (i < gt) {
                const int k = key(rows[i], depth);
                if (k < pivot)
                    std::swap(rows[lt++], rows[i++]);
                else if (k > pivot)
                    std::swap(rows[i], rows[--gt]);
                else
                    ++i;
            }
            sort(rows, lt, depth);
            sort(rows + gt, count - gt, depth);
            if (pivot < 0)
                return;
            rows += lt;
            count = gt - lt;
            ++depth;
        }
    }

private:
    int key(std::uint32_t slot, Pos depth) const noexcept
    {
        const std::uint32_t row = row_of_slot_[slot];
        return depth < lens_[row] ? buf_[row * stride_ + depth] : -1;
    }

    static int median(int a, int b, int c) noexcept
    {
        if (a < b)
            return b < c ? b : (a < c ? c : a);
        return a < c ? a : (b < c ? c : b);
    }

    bool less(std::uint32_t a, std::uint32_t b, Pos depth) const noexcept
    {
        for (Pos d = depth; d < limit_; ++d) {
            const int ka = key(a, d), kb = key(b, d);
            if (ka != kb)
                return ka < kb;
            if (ka < 0)
                return false;
        }
        return false;
    }

    void insertion(std::uint32_t* rows, std::size_t count, Pos depth) const
    {
        for (std::size_t i = 1; i < count; ++i) {
            const std::uint32_t v = rows[i];
            std::size_t j = i;
            while (j > 0 && less(v, rows[j - 1], depth)) {
                rows[j] = rows[j - 1];
                --j;
            }
            rows[j] = v;
        }
    }

    const Symbol* buf_;
    const Pos* lens_;
    const std::uint32_t* row_of_slot_;
    Pos stride_;
    Pos limit_;
};

// Working arrays of one subtree_prepare call. Ranks index the current order
// (sa, slot_of_rank, area, lcp); slots index the original occurrence order
// (isa, row_of_slot).
struct PrepareState {
    std::vector<Pos> sa;
    std::vector<std::uint32_t> isa;           // slot -> rank, or kDone
    std::vector<std::uint32_t> slot_of_rank;  // the P indirection
    std::vector<std::uint32_t> area;          // rank -> area id, or kDone
    std::vector<LcpTriple> lcp;               // lcp[r] between ranks r-1 and r
    std::vector<char> defined;
    std::vector<std::uint32_t> row_of_slot;
    std::vector<Symbol> buf;
    std::vector<Pos> lens;
    Pos start = 0;
    Pos range = 0;
    Pos active = 0;
    Pos undefined = 0;
    std::uint32_t next_area = 1;

    const Symbol* row(std::uint32_t slot) const { return buf.data() + row_of_slot[slot] * range; }
    Pos row_len(std::uint32_t slot) const { return lens[row_of_slot[slot]]; }

    void mark_done(std::uint32_t rank)
    {
        if (area[rank] == kDone)
            return;
        area[rank] = kDone;
        isa[slot_of_rank[rank]] = kDone;
        --active;
    }
};

// Debug-only consistency checks run after every round.
class InvariantChecker {
public:
    explicit InvariantChecker(std::size_t n) : done_pos_(n, 0) {}

    void before_sort(const PrepareState& st)
    {
        prev_area_of_slot_.assign(st.isa.size(), kDone);
        for (std::size_t r = 0; r < st.area.size(); ++r)
            prev_area_of_slot_[st.slot_of_rank[r]] = st.area[r];
    }

    void after_round(const PrepareState& st)
    {
        const std::size_t n = st.sa.size();
        std::unordered_map<std::uint32_t, std::uint32_t> parent;
        std::unordered_map<std::uint32_t, std::size_t> last_rank;
        for (std::size_t r = 0; r < n; ++r) {
            const std::uint32_t slot = st.slot_of_rank[r];
            if (st.area[r] == kDone) {
                if (done_pos_[r] == 0)
                    done_pos_[r] = st.sa[r];
                else if (done_pos_[r] != st.sa[r])
                    fail("done slot moved");
                continue;
            }
            if (st.isa[slot] != r)
                fail("isa[P[j]] != j");
            const std::uint32_t id = st.area[r];
            auto [it, fresh] = last_rank.try_emplace(id, r);
            if (!fresh && it->second + 1 != r)
                fail("active area not contiguous");
            it->second = r;
            auto [pit, pfresh] = parent.try_emplace(id, prev_area_of_slot_[slot]);
            if (!pfresh && pit->second != prev_area_of_slot_[slot])
                fail("active areas merged");
        }
    }

private:
    [[noreturn]] static void fail(const char* what)
    {
        throw InvariantError(std::string("subtree_prepare: ") + what);
    }

    std::vector<Pos> done_pos_;
    std::vector<std::uint32_t> prev_area_of_slot_;
};

void sort_area(PrepareState& st, std::size_t begin, std::size_t end, std::vector<std::uint32_t>& tmp)
{
    tmp.clear();
    for (std::size_t r = begin; r < end; ++r)
        tmp.push_back(st.slot_of_rank[r]);
    RowSorter(st.buf, st.lens, st.row_of_slot, st.range, st.range)
        .sort(tmp.data(), tmp.size(), 0);
    for (std::size_t k = 0; k < tmp.size(); ++k) {
        const auto rank = static_cast<std::uint32_t>(begin + k);
        st.slot_of_rank[rank] = tmp[k];
        st.isa[tmp[k]] = rank;
    }
    // Runs of identical buffers become new active areas.
    auto same = [&](std::uint32_t a, std::uint32_t b) {
        return st.row_len(a) == st.row_len(b) &&
               std::memcmp(st.row(a), st.row(b), st.row_len(a)) == 0;
    };
    std::size_t run = begin;
    while (run < end) {
        std::size_t stop = run + 1;
        while (stop < end && same(st.slot_of_rank[stop - 1], st.slot_of_rank[stop]))
            ++stop;
        const std::uint32_t id = st.next_area++;
        for (std::size_t r = run; r < stop; ++r)
            st.area[r] = id;
        run = stop;
    }
}

} // namespace

std::vector<std::vector<Pos>> locate_occurrences(const VirtualTree& vtree, BlockReader& reader,
                                                 WorkTimes* times)
{
    const auto started = Clock::now();
    std::vector<SymbolString> prefixes;
    prefixes.reserve(vtree.members.size());
    for (const auto& m : vtree.members)
        prefixes.push_back(m.prefix);
    std::vector<std::vector<Pos>> out(prefixes.size());
    for (std::size_t i = 0; i < prefixes.size(); ++i)
        out[i].reserve(vtree.members[i].frequency);
    if (prefixes.empty()) {
        reader.scan([](Pos, Symbol) {});
    } else {
        const PrefixMatcher matcher(prefixes);
        scan_matches(reader, matcher, [&](Pos start, std::size_t id) { out[id].push_back(start); });
    }
    if (times) {
        const double ms = elapsed_ms(started);
        (vtree.members.size() == 1 ? times->cnt1_ms : times->cnt_star_ms) += ms;
    }
    return out;
}

Pos get_range_of_symbols(Pos active_count, const BuildConfig& config)
{
    const Pos work = config.work_memory();
    Pos range = active_count == 0 ? work : work / active_count;
    range = std::max(range, config.block_size);
    return std::min(range, work);
}

SubtreeArrays subtree_prepare(const SymbolString& prefix, std::span<const Pos> positions,
                              const BuildConfig& config, BlockReader& reader,
                              PrepareMetrics* metrics)
{
    const Text& text = reader.text();
    const Pos text_size = text.size();
    const std::size_t n = positions.size();
    SubtreeArrays out;
    out.prefix = prefix;
    if (metrics) {
        metrics->prefix = prefix;
        metrics->occurrences = n;
        metrics->iterations = 0;
    }
    if (n == 0)
        return out;
    if (n >= kDone)
        throw InvariantError("too many occurrences for one subtree");

    const Pos max_len = config.resolved_max_prefix_len(text_size, text.sigma());

    PrepareState st;
    st.sa.assign(positions.begin(), positions.end());
    st.isa.resize(n);
    std::iota(st.isa.begin(), st.isa.end(), 0u);
    st.slot_of_rank = st.isa;
    st.area.assign(n, 0);
    st.lcp.assign(n, LcpTriple{});
    st.defined.assign(n, 0);
    st.row_of_slot.assign(n, kDone);
    st.start = prefix.size();
    st.active = n;
    st.undefined = n - 1;

    std::optional<InvariantChecker> checker;
    if (config.check_invariants)
        checker.emplace(n);
    std::vector<std::uint32_t> tmp;

    while (st.undefined > 0) {
        st.range = get_range_of_symbols(st.active, config);
        if (metrics) {
            if (metrics->iterations == 0) {
                metrics->initial_range = st.range;
                metrics->max_active = st.active;
            }
            ++metrics->iterations;
        }

        // Read the next chunk of every unfinished suffix, in text order.
        st.buf.resize(st.active * st.range);
        st.lens.assign(st.active, 0);
        std::uint32_t row = 0;
        for (std::uint32_t slot = 0; slot < n; ++slot) {
            const std::uint32_t rank = st.isa[slot];
            if (rank == kDone)
                continue;
            st.row_of_slot[slot] = row;
            const Pos at = st.sa[rank] + st.start;
            if (at <= text_size) {
                const auto chunk = reader.read_range(at, st.range);
                std::memcpy(st.buf.data() + row * st.range, chunk.data(), chunk.size());
                st.lens[row] = chunk.size();
            }
            ++row;
        }

        if (checker)
            checker->before_sort(st);

        // Sort inside every active area.
        for (std::size_t r = 0; r < n;) {
            if (st.area[r] == kDone) {
                ++r;
                continue;
            }
            std::size_t e = r + 1;
            while (e < n && st.area[e] == st.area[r])
                ++e;
            sort_area(st, r, e, tmp);
            r = e;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (st.area[r] != kDone)
                st.sa[r] = positions[st.slot_of_rank[r]];
        }

        // Define LCP where adjacent buffers diverge inside this range.
        for (std::size_t i = 1; i < n; ++i) {
            if (st.defined[i])
                continue;
            const std::uint32_t a = st.slot_of_rank[i - 1], b = st.slot_of_rank[i];
            const Symbol* ra = st.row(a);
            const Symbol* rb = st.row(b);
            const Pos la = st.row_len(a), lb = st.row_len(b);
            const Pos limit = std::min(la, lb);
            Pos cp = 0;
            while (cp < limit && ra[cp] == rb[cp])
                ++cp;
            if (cp >= st.range)
                continue;
            st.lcp[i] = {cp < la ? ra[cp] : kDelimiter, cp < lb ? rb[cp] : kDelimiter, st.start + cp};
            st.defined[i] = 1;
            --st.undefined;
            if (i == 1 || st.defined[i - 1])
                st.mark_done(static_cast<std::uint32_t>(i - 1));
            if (i == n - 1 || st.defined[i + 1])
                st.mark_done(static_cast<std::uint32_t>(i));
        }

        st.start += st.range;
        if (checker)
            checker->after_round(st);

        if (st.undefined > 0 && st.start > max_len) {
            std::size_t i = 1;
            while (st.defined[i])
                ++i;
            std::uint64_t tied = 0;
            for (std::size_t r = 0; r < n; ++r)
                tied += st.area[r] == st.area[i];
            throw SkewedInputError(std::string(text.substr(st.sa[i], st.start)), tied);
        }
    }

    out.sa = std::move(st.sa);
    out.lcp.assign(st.lcp.begin() + 1, st.lcp.end());
    return out;
}

HorizontalResult run_horizontal(const Text& text, std::span<const VirtualTree> vtrees,
                                const BuildConfig& config, const SubtreeSink& sink)
{
    config.validate();
    const auto started = Clock::now();
    const unsigned p = config.workers;
    HorizontalResult result;
    result.worker_stats.resize(p);
    result.worker_times.resize(p);
    for (unsigned w = 0; w < p; ++w) {
        result.worker_stats[w].phase = Phase::horizontal;
        result.worker_stats[w].worker = w;
    }
    std::vector<std::vector<PrepareMetrics>> metrics(p);

    struct Failure {
        std::size_t vtree;
        std::exception_ptr error;
        SymbolString prefix;
    };
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mu;
    std::optional<Failure> failure;

    auto worker = [&](unsigned w) {
        BlockReader reader(text, config.block_size, result.worker_stats[w]);
        WorkTimes& times = result.worker_times[w];
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= vtrees.size())
                break;
            const VirtualTree& vt = vtrees[i];
            SymbolString in_flight;
            try {
                reader.invalidate();
                const auto occurrences = locate_occurrences(vt, reader, &times);
                for (std::size_t k = 0; k < vt.members.size(); ++k) {
                    if (occurrences[k].empty())
                        continue;
                    in_flight = vt.members[k].prefix;
                    PrepareMetrics m;
                    auto t0 = Clock::now();
                    SubtreeArrays arrays =
                        subtree_prepare(in_flight, occurrences[k], config, reader, &m);
                    times.prepare_ms += elapsed_ms(t0);
                    t0 = Clock::now();
                    sink(std::move(arrays), w);
                    times.emit_ms += elapsed_ms(t0);
                    metrics[w].push_back(std::move(m));
                }
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure || i < failure->vtree)
                    failure = Failure{i, std::current_exception(), in_flight};
                failed = true;
            }
        }
    };

    if (p == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(p);
        for (unsigned w = 0; w < p; ++w)
            threads.emplace_back(worker, w);
    }

    if (failure) {
        try {
            std::rethrow_exception(failure->error);
        } catch (const SkewedInputError&) {
            throw;
        } catch (const std::exception& e) {
            throw BuildError(failure->prefix, e.what());
        }
    }

    for (auto& part : metrics) {
        for (auto& m : part)
            result.subtrees.push_back(std::move(m));
    }
    std::sort(result.subtrees.begin(), result.subtrees.end(),
              [](const PrepareMetrics& a, const PrepareMetrics& b) { return a.prefix < b.prefix; });
    result.wall_ms = elapsed_ms(started);
    return result;
}

std::vector<SubtreeArrays> collect_horizontal(const Text& text,
                                              std::span<const VirtualTree> vtrees,
                                              const BuildConfig& config, HorizontalResult* result)
{
    std::mutex mu;
    std::vector<SubtreeArrays> out;
    auto res = run_horizontal(text, vtrees, config, [&](SubtreeArrays&& arrays, unsigned) {
        std::lock_guard lock(mu);
        out.push_back(std::move(arrays));
    });
    std::sort(out.begin(), out.end(),
              [](const SubtreeArrays& a, const SubtreeArrays& b) { return a.prefix < b.prefix; });
    if (result)
        *result = std::move(res);
    return out;
}

} // namespace era
