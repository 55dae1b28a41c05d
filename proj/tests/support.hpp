#pragma once

#include "era/text.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace era::test {

// "banana" over the alphabet "abn" and similar; '$' in `s` is the delimiter.
inline Text make_text(std::string_view s, std::string_view chars)
{
    const Alphabet alphabet = Alphabet::from_chars(chars);
    std::vector<Symbol> symbols;
    for (const char c : s)
        symbols.push_back(c == '$' ? kDelimiter : *alphabet.encode(static_cast<unsigned char>(c)));
    return Text::from_symbols(std::move(symbols), alphabet);
}

inline Text banana() { return make_text("banana$", "abn"); }
inline Text mississippi() { return make_text("mississippi$", "imps"); }

// External characters to codes; '$' becomes the delimiter.
inline SymbolString codes(const Text& text, std::string_view s)
{
    SymbolString out;
    for (const char c : s)
        out += c == '$' ? static_cast<char>(kDelimiter)
                        : static_cast<char>(*text.alphabet().encode(static_cast<unsigned char>(c)));
    return out;
}

inline std::string letters(const Text& text, std::string_view codes)
{
    std::string out;
    for (const char c : codes)
        out += c == 0 ? '$' : static_cast<char>(text.alphabet().decode(static_cast<Symbol>(c)));
    return out;
}

// Every text of length 1..max_body over sigma symbols (plus the delimiter),
// shortest first.
inline std::vector<std::vector<Symbol>> all_bodies(unsigned max_body, unsigned sigma)
{
    std::vector<std::vector<Symbol>> out{{}};
    std::vector<std::vector<Symbol>> layer{{}};
    for (unsigned len = 1; len <= max_body; ++len) {
        std::vector<std::vector<Symbol>> next;
        for (const auto& body : layer) {
            for (unsigned s = 1; s <= sigma; ++s) {
                auto b = body;
                b.push_back(static_cast<Symbol>(s));
                next.push_back(std::move(b));
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

} // namespace era::test
