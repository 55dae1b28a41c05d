#pragma once

#include "era/config.hpp"
#include "era/index.hpp"
#include "era/text.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace era::cli {

// Process exit codes.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int mismatch = 1;  // verify found a divergence or a corrupt file
inline constexpr int skewed = 2;
inline constexpr int io = 3;
inline constexpr int digest = 4;    // index was built from another text
inline constexpr int usage = 5;     // bad flags, config values or input symbols
inline constexpr int internal = 6;
} // namespace exit_code

// Runs one command line; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Decimal integer or 2^k.
std::uint64_t parse_size(std::string_view text);

// Unset fields fall through to the next source.
struct ConfigOverrides {
    std::optional<std::string> memory_budget;
    std::optional<std::string> block_size;
    std::optional<std::string> workers;
    std::optional<std::string> max_prefix_len;
    std::optional<std::string> seed;
    bool check_invariants = false;
};

// Flags, then ERA_ST_THREADS (p only), then the key=value file, then
// defaults with p = hardware threads.
BuildConfig resolve_config(const ConfigOverrides& flags,
                           const std::optional<std::filesystem::path>& config_file);

struct VerifyOptions {
    std::size_t probes = 1000;
    std::uint64_t seed = 1;
};

// Compares a stored index against the oracles. Writes the first divergence
// to `report` and returns false; IndexCorruptError propagates.
bool verify_index(const IndexStore& store, const Text& text, const VerifyOptions& options,
                  std::ostream& report);

} // namespace era::cli
