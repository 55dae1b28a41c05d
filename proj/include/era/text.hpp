#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace era {

using Symbol = std::uint8_t;
// 1-based text position or a length in symbols. Always 64-bit.
using Pos = std::uint64_t;
// A sequence of internal symbol codes (delimiter 0, alphabet 1..sigma).
// std::string compares bytes as unsigned char, so ordering matches the
// symbol order.
using SymbolString = std::string;

inline constexpr Symbol kDelimiter = 0;
inline constexpr unsigned kMinSigma = 2;
inline constexpr unsigned kMaxSigma = 255;

// Maps external bytes to internal symbol codes: the i-th alphabet character
// gets code i+1. Code 0 is reserved for the delimiter.
class Alphabet {
public:
    // Codes 1..sigma are their own external bytes.
    static Alphabet identity(unsigned sigma);
    // Consecutive bytes first, first+1, ..., first+sigma-1.
    static Alphabet contiguous(unsigned sigma, unsigned char first);
    // Explicit list of distinct, non-zero bytes.
    static Alphabet from_chars(std::string_view chars);

    unsigned sigma() const noexcept { return static_cast<unsigned>(chars_.size()); }
    const std::string& chars() const noexcept { return chars_; }

    // Internal code for an external byte, if the byte belongs to the alphabet.
    std::optional<Symbol> encode(unsigned char c) const noexcept;
    unsigned char decode(Symbol s) const noexcept;

    std::optional<SymbolString> encode(std::string_view external) const;
    std::string decode(std::string_view codes) const;

    bool operator==(const Alphabet&) const = default;

private:
    explicit Alphabet(std::string chars);

    std::string chars_;
    std::array<std::int16_t, 256> code_of_{};
};

// The input string S[1..N]. Immutable once constructed; the last symbol is the
// unique delimiter and every other symbol is a code in 1..sigma.
class Text {
public:
    // Validates and takes ownership of `symbols`. A missing trailing delimiter
    // is appended.
    static Text from_symbols(std::vector<Symbol> symbols, unsigned sigma);
    static Text from_symbols(std::vector<Symbol> symbols, Alphabet alphabet);

    Pos size() const noexcept { return symbols_.size(); }
    unsigned sigma() const noexcept { return alphabet_.sigma(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }

    std::span<const Symbol> symbols() const noexcept { return symbols_; }
    // S[pos], 1-based.
    Symbol at(Pos pos) const noexcept { return symbols_[pos - 1]; }
    // Up to `len` symbols from 1-based `pos`, truncated at the text end.
    std::string_view substr(Pos pos, Pos len) const noexcept;

    // SHA-256 of the symbol codes and sigma, lowercase hex.
    std::string digest() const;

private:
    Text(std::vector<Symbol> symbols, Alphabet alphabet);

    std::vector<Symbol> symbols_;
    Alphabet alphabet_;
};

// Uniformly random text: length-1 i.i.d. symbols over 1..sigma followed by the
// delimiter. Deterministic for a fixed seed.
Text generate_random_text(Pos length, unsigned sigma, std::uint64_t seed);

// Reads raw bytes, one symbol per byte. When `alphabet` is not given it is
// inferred: identity codes if every byte lies in 1..sigma, otherwise the
// contiguous range starting at 'a'. A trailing 0 byte is taken as the
// delimiter; one is appended otherwise.
Text load_text(const std::filesystem::path& path, unsigned sigma,
               std::optional<Alphabet> alphabet = std::nullopt);

// Writes the external bytes of `text` including the trailing 0 byte, so that
// load_text with the same alphabet restores it.
void save_text(const Text& text, const std::filesystem::path& path);

} // namespace era
