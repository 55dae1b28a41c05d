#include "commands.hpp"

#include "era/bench.hpp"
#include "era/build.hpp"
#include "era/errors.hpp"
#include "era/oracle.hpp"
#include "era/subtree.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

namespace era::cli {

std::uint64_t parse_size(std::string_view text)
{
    auto parse_int = [&](std::string_view s) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
            throw ConfigError("not a number: " + std::string(text));
        return v;
    };
    if (text.starts_with("2^")) {
        const auto k = parse_int(text.substr(2));
        if (k > 62)
            throw ConfigError("exponent too large: " + std::string(text));
        return std::uint64_t{1} << k;
    }
    return parse_int(text);
}

namespace {

bool parse_bool(std::string_view v)
{
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw ConfigError("not a boolean: " + std::string(v));
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

unsigned to_workers(std::string_view v)
{
    const auto p = parse_size(v);
    if (p == 0 || p > 4096)
        throw ConfigError("worker count out of range: " + std::string(v));
    return static_cast<unsigned>(p);
}

void apply_file(BuildConfig& config, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line without '=': " + line);
        const auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));
        if (key == "m")
            config.memory_budget = parse_size(value);
        else if (key == "b")
            config.block_size = parse_size(value);
        else if (key == "p")
            config.workers = to_workers(value);
        else if (key == "max_prefix_len")
            config.max_prefix_len = parse_size(value);
        else if (key == "seed")
            config.rng_seed = parse_size(value);
        else if (key == "check_invariants")
            config.check_invariants = parse_bool(value);
        else
            throw ConfigError("unknown config key: " + key);
    }
}

} // namespace

BuildConfig resolve_config(const ConfigOverrides& flags,
                           const std::optional<std::filesystem::path>& config_file)
{
    BuildConfig config;
    config.workers = std::max(1u, std::thread::hardware_concurrency());
    if (config_file)
        apply_file(config, *config_file);
    if (const char* env = std::getenv("ERA_ST_THREADS"); env && *env)
        config.workers = to_workers(env);
    if (flags.memory_budget)
        config.memory_budget = parse_size(*flags.memory_budget);
    if (flags.block_size)
        config.block_size = parse_size(*flags.block_size);
    if (flags.workers)
        config.workers = to_workers(*flags.workers);
    if (flags.max_prefix_len)
        config.max_prefix_len = parse_size(*flags.max_prefix_len);
    if (flags.seed)
        config.rng_seed = parse_size(*flags.seed);
    if (flags.check_invariants)
        config.check_invariants = true;
    config.validate();
    return config;
}

namespace {

std::string join(const std::vector<Pos>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(values[i]);
    }
    return out;
}

// A few symbols of the suffix at `pos`, decoded, with '$' for the delimiter.
std::string context(const Text& text, Pos pos)
{
    std::string out;
    for (const char c : text.substr(pos, 16)) {
        const auto s = static_cast<Symbol>(c);
        out += s == kDelimiter ? '$' : static_cast<char>(text.alphabet().decode(s));
    }
    return out;
}

std::vector<SymbolString> probe_patterns(const Text& text, const VerifyOptions& options)
{
    std::mt19937_64 rng(options.seed);
    const Pos n = text.size();
    const Pos max_len = ceil_log(n, text.sigma()) + 3;
    auto uniform = [&](Pos lo, Pos hi) { return std::uniform_int_distribution<Pos>(lo, hi)(rng); };
    auto random_symbols = [&](Pos len) {
        SymbolString s;
        for (Pos i = 0; i < len; ++i)
            s += static_cast<char>(uniform(1, text.sigma()));
        return s;
    };
    // Text pieces stop before the delimiter; patterns never contain it.
    auto piece = [&](Pos len) {
        const Pos pos = uniform(1, n - 1);
        return std::string(text.substr(pos, std::min(len, n - pos)));
    };
    std::vector<SymbolString> out;
    for (std::size_t i = 0; i < options.probes; ++i) {
        const Pos len = uniform(1, max_len);
        switch (i % 3) {
        case 0:
            out.push_back(piece(len));
            break;
        case 1:
            out.push_back(random_symbols(len));
            break;
        default:  // present head, random tail
            out.push_back(piece(len).append(random_symbols(uniform(1, 3))));
            break;
        }
    }
    return out;
}

} // namespace

bool verify_index(const IndexStore& store, const Text& text, const VerifyOptions& options,
                  std::ostream& report)
{
    const auto trie_blob = store.get(std::string(index_files::kTopTrie));
    if (!trie_blob)
        throw IndexCorruptError("index has no top trie");
    unsigned trie_sigma = 0;
    const Index index(text, TopTrie::deserialize(*trie_blob, &trie_sigma), store);
    if (trie_sigma != text.sigma()) {
        report << "top trie sigma " << trie_sigma << " differs from text sigma " << text.sigma()
               << '\n';
        return false;
    }

    bool good = true;
    index.for_each_subtree([&](const TopTrie::Leaf& leaf, const SuffixSubtree* tree) {
        if (!good || !tree)
            return;
        const std::string problem = check_subtree(*tree, text);
        if (!problem.empty()) {
            report << "subtree file " << leaf.file_name << ": " << problem << '\n';
            good = false;
        } else if (const auto f = oracle::naive_count(text, leaf.prefix); tree->leaf_count() != f) {
            report << "subtree file " << leaf.file_name << ": " << tree->leaf_count()
                   << " leaves, prefix occurs " << f << " times\n";
            good = false;
        }
    });
    if (!good)
        return false;

    std::vector<Pos> leaves;
    leaves.reserve(text.size());
    index.for_each_leaf([&](Pos pos, Pos) { leaves.push_back(pos); });
    const auto expected = oracle::naive_suffix_array(text);
    for (std::size_t r = 0; r < std::max(leaves.size(), expected.size()); ++r) {
        if (r >= leaves.size() || r >= expected.size() || leaves[r] != expected[r]) {
            report << "suffix rank " << r << ": index ";
            if (r < leaves.size())
                report << leaves[r] << " \"" << context(text, leaves[r]) << '"';
            else
                report << "ends";
            report << ", expected ";
            if (r < expected.size())
                report << expected[r] << " \"" << context(text, expected[r]) << '"';
            else
                report << "end";
            report << '\n';
            return false;
        }
    }

    for (const SymbolString& p : probe_patterns(text, options)) {
        const auto where = oracle::naive_search(text, p);
        const auto [length, witness] = oracle::naive_longest_prefix(text, p);
        const auto got = index.locate(p);
        const auto longest = index.longest_prefix(p);
        const bool witness_ok =
            longest.witness.has_value() == witness.has_value() &&
            (!longest.witness || text.substr(*longest.witness, length) == std::string_view(p).substr(0, length));
        if (got != where || index.exists(p) != !where.empty() || longest.length != length ||
            !witness_ok) {
            report << "query \"" << text.alphabet().decode(p) << "\": locate [" << join(got)
                   << "] expected [" << join(where) << "], longest " << longest.length
                   << " expected " << length << '\n';
            return false;
        }
    }
    return true;
}

namespace {

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

void add_config_flags(CLI::App* cmd, ConfigOverrides& o, std::optional<std::string>& config_file,
                      bool with_workers = true)
{
    cmd->add_option("-m,--memory", o.memory_budget, "memory budget M in symbols (default 2^22)");
    cmd->add_option("-b,--block", o.block_size, "block size B in symbols (default 2^12)");
    if (with_workers)
        cmd->add_option("-p,--workers", o.workers, "horizontal-phase workers (default: cores)");
    cmd->add_option("--max-prefix-len", o.max_prefix_len, "skew threshold on prefix length");
    cmd->add_option("--seed", o.seed, "seed recorded in the config");
    cmd->add_option("--config", config_file, "key=value file: m, b, p, max_prefix_len, seed, check_invariants");
    cmd->add_flag("--check-invariants", o.check_invariants, "assert horizontal-phase invariants");
}

std::optional<std::filesystem::path> as_path(const std::optional<std::string>& s)
{
    if (!s)
        return std::nullopt;
    return std::filesystem::path(*s);
}

std::optional<Alphabet> alphabet_flag(const std::optional<std::string>& chars)
{
    if (!chars)
        return std::nullopt;
    return Alphabet::from_chars(*chars);
}

Alphabet manifest_alphabet(const Manifest& manifest)
{
    const auto it = manifest.find("alphabet");
    if (it == manifest.end())
        throw IndexCorruptError("manifest has no alphabet");
    return Alphabet::from_chars(hex_decode(it->second));
}

Manifest read_manifest(const IndexStore& store)
{
    const auto blob = store.get(std::string(index_files::kManifest));
    if (!blob)
        throw IndexCorruptError("index has no manifest");
    return parse_manifest(*blob);
}

// Removes blobs a previous build may have left behind.
void clear_index_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        return;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        const bool ours = name.starts_with("st_") || name == index_files::kTopTrie ||
                          name == index_files::kManifest || name == index_files::kStats ||
                          name == index_files::kText;
        if (ours && entry.is_regular_file())
            std::filesystem::remove(entry.path());
    }
}

int cmd_generate(Pos n, unsigned sigma, std::uint64_t seed, unsigned copies,
                 const std::string& out_path, Streams io)
{
    if (n < 2)
        throw ConfigError("--n must be at least 2");
    if (copies < 1)
        throw ConfigError("--copies must be at least 1");
    const Text unit = generate_random_text(n, sigma, seed);
    const auto body = unit.symbols().first(unit.size() - 1);
    std::vector<Symbol> symbols;
    symbols.reserve(body.size() * copies + 1);
    for (unsigned c = 0; c < copies; ++c)
        symbols.insert(symbols.end(), body.begin(), body.end());
    const Alphabet alphabet = sigma <= 26 ? Alphabet::contiguous(sigma, 'a') : Alphabet::identity(sigma);
    const Text text = Text::from_symbols(std::move(symbols), alphabet);
    save_text(text, out_path);
    io.out << "n=" << text.size() << " sigma=" << sigma << " digest=" << text.digest() << '\n';
    return exit_code::ok;
}

int cmd_build(const std::string& text_path, unsigned sigma, const std::optional<std::string>& chars,
              const std::string& out_dir, const BuildConfig& config, Streams io)
{
    const Text text = load_text(text_path, sigma, alphabet_flag(chars));
    if (!config.block_holds_node(text.size()))
        io.err << "warning: B below 2 lg N; one node per block is not guaranteed\n";
    clear_index_dir(out_dir);
    DirectoryStore store(out_dir, true);
    std::optional<BuildReport> built;
    try {
        built.emplace(build_index(text, config, store));
    } catch (const SkewedInputError& e) {
        const std::string shown = text.alphabet().decode(std::string_view(e.prefix()).substr(0, 64));
        io.err << "skewed input: prefix \"" << shown << (e.prefix().size() > 64 ? "..." : "")
               << "\" (length " << e.prefix().size() << ") occurs " << e.frequency() << " times\n";
        return exit_code::skewed;
    }
    const BuildReport& report = *built;
    io.out << "n=" << report.text_size << " sigma=" << report.sigma << " p=" << report.workers
           << " prefixes=" << report.prefix_count << " direct_leaves=" << report.direct_leaf_count
           << " vtrees=" << report.vtree_count << " vertical_scans=" << report.vertical.full_scans
           << " digest=" << index_digest(store) << '\n';
    return exit_code::ok;
}

int cmd_verify(const std::string& index_dir, const std::string& text_path,
               const VerifyOptions& options, Streams io)
{
    const DirectoryStore store(index_dir, false);
    const Manifest manifest = read_manifest(store);
    const Alphabet alphabet = manifest_alphabet(manifest);
    std::optional<Text> text;
    try {
        text.emplace(load_text(text_path, alphabet.sigma(), alphabet));
    } catch (const AlphabetError& e) {
        io.err << "text does not match the index: " << e.what() << '\n';
        return exit_code::digest;
    } catch (const DelimiterError& e) {
        io.err << "text does not match the index: " << e.what() << '\n';
        return exit_code::digest;
    }
    const auto it = manifest.find("text_digest");
    if (it == manifest.end() || it->second != text->digest()) {
        io.err << "text digest " << text->digest() << " differs from index text_digest "
               << (it == manifest.end() ? "(none)" : it->second) << '\n';
        return exit_code::digest;
    }
    std::ostringstream report;
    if (!verify_index(store, *text, options, report)) {
        io.err << "verify failed: " << report.str();
        return exit_code::mismatch;
    }
    io.out << "ok n=" << text->size() << " probes=" << options.probes << '\n';
    return exit_code::ok;
}

int cmd_query(const std::string& index_dir, const std::string& mode, const std::string& pattern,
              Streams io)
{
    const DirectoryStore store(index_dir, false);
    const auto opened = Index::open(store);
    const Alphabet& alphabet = opened.text->alphabet();
    // Encode up to the first byte outside the alphabet.
    SymbolString codes;
    bool complete = true;
    for (const char c : pattern) {
        const auto s = alphabet.encode(static_cast<unsigned char>(c));
        if (!s) {
            complete = false;
            break;
        }
        codes += static_cast<char>(*s);
    }
    if (mode == "exists") {
        io.out << (complete && opened.index->exists(codes) ? "true" : "false") << '\n';
    } else if (mode == "locate") {
        io.out << (complete ? join(opened.index->locate(codes)) : std::string()) << '\n';
    } else {
        const auto r = opened.index->longest_prefix(codes);
        io.out << r.length;
        if (r.witness)
            io.out << ' ' << *r.witness;
        io.out << '\n';
    }
    return exit_code::ok;
}

int cmd_stats(const std::string& index_dir, Streams io)
{
    const DirectoryStore store(index_dir, false);
    const auto blob = store.get(std::string(index_files::kStats));
    if (!blob)
        throw IndexCorruptError("index has no " + std::string(index_files::kStats));
    io.out << *blob;
    return exit_code::ok;
}

void write_output(const std::optional<std::string>& path, const std::string& csv, std::ostream& out)
{
    if (!path) {
        out << csv;
        return;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file || !(file << csv) || !file.flush())
        throw IoError("cannot write " + *path);
}

std::vector<Pos> parse_sizes(const std::vector<std::string>& values)
{
    std::vector<Pos> out;
    for (const auto& v : values)
        out.push_back(parse_size(v));
    return out;
}

int dispatch(CLI::App& app, Streams io, int argc, const char* const* argv)
{
    app.require_subcommand(1);

    Pos gen_n = 0;
    unsigned gen_sigma = 4;
    std::uint64_t gen_seed = 1;
    unsigned gen_copies = 1;
    std::string gen_n_text, gen_out;
    auto* generate = app.add_subcommand("generate", "write a uniform random text file");
    generate->add_option("--n", gen_n_text, "length including the delimiter")->required();
    generate->add_option("--sigma", gen_sigma, "alphabet size")->required()->check(CLI::Range(2, 255));
    generate->add_option("--seed", gen_seed, "RNG seed");
    generate->add_option("--copies", gen_copies, "repeat the random body this many times");
    generate->add_option("--out", gen_out, "output file")->required();

    ConfigOverrides build_flags;
    std::optional<std::string> build_config, build_chars;
    std::string build_text, build_out;
    unsigned build_sigma = 0;
    auto* build = app.add_subcommand("build", "build an index directory");
    build->add_option("text", build_text, "input text file")->required();
    build->add_option("--sigma", build_sigma, "alphabet size")->required()->check(CLI::Range(2, 255));
    build->add_option("--alphabet", build_chars, "alphabet characters in order");
    build->add_option("-o,--out", build_out, "index directory")->required();
    add_config_flags(build, build_flags, build_config);

    VerifyOptions verify_options;
    std::string verify_dir, verify_text;
    auto* verify = app.add_subcommand("verify", "check an index against brute-force oracles");
    verify->add_option("index", verify_dir, "index directory")->required();
    verify->add_option("text", verify_text, "text the index was built from")->required();
    verify->add_option("--probes", verify_options.probes, "random query probes");
    verify->add_option("--seed", verify_options.seed, "probe RNG seed");

    std::string query_dir, query_mode, query_pattern;
    auto* query = app.add_subcommand("query", "exists | locate | longest");
    query->add_option("index", query_dir, "index directory")->required();
    query->add_option("mode", query_mode, "exists, locate or longest")
        ->required()
        ->check(CLI::IsMember({"exists", "locate", "longest"}));
    query->add_option("pattern", query_pattern, "pattern in the text's alphabet")->required();

    std::string stats_dir;
    auto* stats = app.add_subcommand("stats", "print the I/O counters of a build as CSV");
    stats->add_option("index", stats_dir, "index directory")->required();

    auto* bench = app.add_subcommand("bench", "benchmark grids");
    bench->require_subcommand(1);

    ConfigOverrides grid_flags;
    std::optional<std::string> grid_config, grid_out;
    std::vector<std::string> grid_n;
    std::vector<unsigned> grid_sigma;
    std::vector<std::uint64_t> grid_seeds{1};
    auto* grid = bench->add_subcommand("grid", "vertical and horizontal rows per (N, sigma, seed)");
    grid->add_option("--n", grid_n, "text lengths")->required();
    grid->add_option("--sigma", grid_sigma, "alphabet sizes")->required()->check(CLI::Range(2, 255));
    grid->add_option("--seeds", grid_seeds, "text seeds");
    grid->add_option("--out", grid_out, "CSV file (default stdout)");
    add_config_flags(grid, grid_flags, grid_config);

    ConfigOverrides scaling_flags;
    std::optional<std::string> scaling_config, scaling_out;
    std::string scaling_n = "2^20";
    unsigned scaling_sigma = 4;
    std::uint64_t scaling_seed = 1;
    std::vector<unsigned> scaling_p{1, 2, 4};
    auto* scaling = bench->add_subcommand("scaling", "horizontal wall time per worker count");
    scaling->add_option("--n", scaling_n, "text length");
    scaling->add_option("--sigma", scaling_sigma, "alphabet size")->check(CLI::Range(2, 255));
    scaling->add_option("--text-seed", scaling_seed, "text seed");
    scaling->add_option("-p,--p", scaling_p, "worker counts")->check(CLI::Range(1, 4096));
    scaling->add_option("--out", scaling_out, "CSV file (default stdout)");
    add_config_flags(scaling, scaling_flags, scaling_config, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, io.out, io.err);
        return code == 0 ? exit_code::ok : exit_code::usage;
    }

    if (generate->parsed()) {
        gen_n = parse_size(gen_n_text);
        return cmd_generate(gen_n, gen_sigma, gen_seed, gen_copies, gen_out, io);
    }
    if (build->parsed())
        return cmd_build(build_text, build_sigma, build_chars, build_out,
                         resolve_config(build_flags, as_path(build_config)), io);
    if (verify->parsed())
        return cmd_verify(verify_dir, verify_text, verify_options, io);
    if (query->parsed())
        return cmd_query(query_dir, query_mode, query_pattern, io);
    if (stats->parsed())
        return cmd_stats(stats_dir, io);
    if (grid->parsed()) {
        const auto config = resolve_config(grid_flags, as_path(grid_config));
        const auto n_values = parse_sizes(grid_n);
        std::string csv = std::string(bench::kGridHeader) + '\n';
        for (const auto& row : bench::run_grid(n_values, grid_sigma, config, grid_seeds))
            csv += bench::to_csv(row) + '\n';
        write_output(grid_out, csv, io.out);
        return exit_code::ok;
    }
    if (scaling->parsed()) {
        const auto config = resolve_config(scaling_flags, as_path(scaling_config));
        std::string csv = std::string(bench::kScalingHeader) + '\n';
        for (const auto& row : bench::run_worker_scaling(parse_size(scaling_n), scaling_sigma,
                                                         scaling_p, config, scaling_seed))
            csv += bench::to_csv(row) + '\n';
        write_output(scaling_out, csv, io.out);
        return exit_code::ok;
    }
    return exit_code::usage;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    CLI::App app("ERA suffix tree construction with block I/O accounting", "era_st");
    Streams io{out, err};
    try {
        return dispatch(app, io, static_cast<int>(argv.size()), argv.data());
    } catch (const SkewedInputError& e) {
        err << "skewed input: prefix of length " << e.prefix().size() << " occurs "
            << e.frequency() << " times\n";
        return exit_code::skewed;
    } catch (const IndexCorruptError& e) {
        err << "corrupt index: " << e.what() << '\n';
        return exit_code::mismatch;
    } catch (const ConfigError& e) {
        err << "config: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const AlphabetError& e) {
        err << "input: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const DelimiterError& e) {
        err << "input: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const IoError& e) {
        err << "i/o: " << e.what() << '\n';
        return exit_code::io;
    } catch (const InputError& e) {
        err << "i/o: " << e.what() << '\n';
        return exit_code::io;
    } catch (const BuildError& e) {
        err << "build: " << e.what() << '\n';
        return exit_code::io;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o: " << e.what() << '\n';
        return exit_code::io;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::internal;
    }
}

} // namespace era::cli
