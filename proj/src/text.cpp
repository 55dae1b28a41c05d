#include "era/text.hpp"

#include "era/digest.hpp"
#include "era/errors.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <random>

namespace era {

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::string chars) : chars_(std::move(chars))
{
    if (chars_.size() < kMinSigma || chars_.size() > kMaxSigma)
        throw AlphabetError("alphabet size " + std::to_string(chars_.size()) +
                            " outside " + std::to_string(kMinSigma) + ".." +
                            std::to_string(kMaxSigma));
    code_of_.fill(-1);
    for (std::size_t i = 0; i < chars_.size(); ++i) {
        auto c = static_cast<unsigned char>(chars_[i]);
        if (c == 0)
            throw AlphabetError("alphabet must not contain the delimiter byte 0");
        if (code_of_[c] != -1)
            throw AlphabetError("alphabet contains byte " + std::to_string(c) + " twice");
        code_of_[c] = static_cast<std::int16_t>(i + 1);
    }
}

Alphabet Alphabet::identity(unsigned sigma)
{
    return contiguous(sigma, 1);
}

Alphabet Alphabet::contiguous(unsigned sigma, unsigned char first)
{
    if (sigma < kMinSigma || sigma > kMaxSigma)
        throw AlphabetError("sigma " + std::to_string(sigma) + " outside 2..255");
    if (first == 0 || first + sigma - 1 > 255)
        throw AlphabetError("contiguous alphabet does not fit in 1..255");
    std::string chars;
    for (unsigned i = 0; i < sigma; ++i)
        chars.push_back(static_cast<char>(first + i));
    return Alphabet(std::move(chars));
}

Alphabet Alphabet::from_chars(std::string_view chars)
{
    return Alphabet(std::string(chars));
}

std::optional<Symbol> Alphabet::encode(unsigned char c) const noexcept
{
    if (code_of_[c] < 0)
        return std::nullopt;
    return static_cast<Symbol>(code_of_[c]);
}

unsigned char Alphabet::decode(Symbol s) const noexcept
{
    if (s == kDelimiter || s > chars_.size())
        return '$';
    return static_cast<unsigned char>(chars_[s - 1]);
}

std::optional<SymbolString> Alphabet::encode(std::string_view external) const
{
    SymbolString out;
    out.reserve(external.size());
    for (char c : external) {
        auto code = encode(static_cast<unsigned char>(c));
        if (!code)
            return std::nullopt;
        out.push_back(static_cast<char>(*code));
    }
    return out;
}

std::string Alphabet::decode(std::string_view codes) const
{
    std::string out;
    out.reserve(codes.size());
    for (char c : codes)
        out.push_back(static_cast<char>(decode(static_cast<Symbol>(c))));
    return out;
}

// ---------------------------------------------------------------- Text

Text::Text(std::vector<Symbol> symbols, Alphabet alphabet)
    : symbols_(std::move(symbols)), alphabet_(std::move(alphabet))
{
}

Text Text::from_symbols(std::vector<Symbol> symbols, unsigned sigma)
{
    return from_symbols(std::move(symbols), Alphabet::identity(sigma));
}

Text Text::from_symbols(std::vector<Symbol> symbols, Alphabet alphabet)
{
    if (symbols.empty() || symbols.back() != kDelimiter)
        symbols.push_back(kDelimiter);
    const auto sigma = alphabet.sigma();
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
        if (symbols[i] == kDelimiter)
            throw DelimiterError("delimiter at position " + std::to_string(i + 1) +
                                 " of " + std::to_string(symbols.size()));
        if (symbols[i] > sigma)
            throw AlphabetError("symbol " + std::to_string(symbols[i]) + " at position " +
                                std::to_string(i + 1) + " outside alphabet of size " +
                                std::to_string(sigma));
    }
    return Text(std::move(symbols), std::move(alphabet));
}

std::string_view Text::substr(Pos pos, Pos len) const noexcept
{
    if (pos < 1 || pos > size())
        return {};
    const Pos avail = size() - pos + 1;
    return {reinterpret_cast<const char*>(symbols_.data() + (pos - 1)),
            static_cast<std::size_t>(len < avail ? len : avail)};
}

std::string Text::digest() const
{
    Sha256 h;
    const std::string header = "sigma=" + std::to_string(sigma()) + ";";
    h.update(header);
    h.update({reinterpret_cast<const char*>(symbols_.data()), symbols_.size()});
    return h.hex_digest();
}

Text generate_random_text(Pos length, unsigned sigma, std::uint64_t seed)
{
    if (sigma < kMinSigma || sigma > kMaxSigma)
        throw AlphabetError("sigma " + std::to_string(sigma) + " outside 2..255");
    if (length < 1)
        throw InputError("text length must be at least 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> dist(1, sigma);
    std::vector<Symbol> symbols(length);
    for (Pos i = 0; i + 1 < length; ++i)
        symbols[i] = static_cast<Symbol>(dist(rng));
    symbols[length - 1] = kDelimiter;
    return Text::from_symbols(std::move(symbols), sigma);
}

namespace {

// 'a'.. when every byte fits that range, otherwise the distinct bytes in
// order, padded with the smallest unused bytes.
Alphabet infer_alphabet(std::string_view raw, unsigned sigma)
{
    std::array<bool, 256> seen{};
    for (auto c : raw)
        seen[static_cast<unsigned char>(c)] = true;
    seen[0] = false;
    bool letters = true;
    std::string chars;
    for (unsigned c = 1; c < 256; ++c) {
        if (!seen[c])
            continue;
        chars += static_cast<char>(c);
        letters = letters && c >= 'a' && c < 'a' + sigma;
    }
    if (letters && 'a' + sigma <= 256)
        return Alphabet::contiguous(sigma, 'a');
    if (chars.size() > sigma)
        throw AlphabetError("input has " + std::to_string(chars.size()) +
                            " distinct symbols but sigma is " + std::to_string(sigma));
    for (unsigned c = 1; c < 256 && chars.size() < sigma; ++c) {
        if (!seen[c])
            chars += static_cast<char>(c);
    }
    std::sort(chars.begin(), chars.end(),
              [](char a, char b) { return static_cast<unsigned char>(a) < static_cast<unsigned char>(b); });
    return Alphabet::from_chars(chars);
}

} // namespace

Text load_text(const std::filesystem::path& path, unsigned sigma,
               std::optional<Alphabet> alphabet)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path.string());
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (raw.empty())
        throw InputError("empty input file " + path.string());

    if (!alphabet) {
        bool identity = true;
        for (std::size_t i = 0; i < raw.size() && identity; ++i) {
            auto c = static_cast<unsigned char>(raw[i]);
            identity = (c >= 1 && c <= sigma) || (c == 0 && i + 1 == raw.size());
        }
        alphabet = identity ? Alphabet::identity(sigma) : infer_alphabet(raw, sigma);
    } else if (alphabet->sigma() != sigma) {
        throw AlphabetError("alphabet has " + std::to_string(alphabet->sigma()) +
                            " symbols but sigma is " + std::to_string(sigma));
    }

    std::vector<Symbol> symbols;
    symbols.reserve(raw.size() + 1);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto c = static_cast<unsigned char>(raw[i]);
        if (c == 0) {
            if (i + 1 != raw.size())
                throw DelimiterError("delimiter byte at position " + std::to_string(i + 1) +
                                     " of " + path.string());
            break;
        }
        auto code = alphabet->encode(c);
        if (!code)
            throw AlphabetError("byte " + std::to_string(c) + " at position " +
                                std::to_string(i + 1) + " is not in the alphabet");
        symbols.push_back(*code);
    }
    symbols.push_back(kDelimiter);
    return Text::from_symbols(std::move(symbols), std::move(*alphabet));
}

void save_text(const Text& text, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    std::string bytes;
    bytes.reserve(text.size());
    for (Symbol s : text.symbols())
        bytes.push_back(s == kDelimiter ? '\0' : static_cast<char>(text.alphabet().decode(s)));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("short write to " + path.string());
}

} // namespace era
