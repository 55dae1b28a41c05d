#pragma once

#include "era/errors.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace era::binary {

// Little-endian field encoding shared by the index file formats.

template <typename T>
void put(std::string& out, T value)
{
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
}

class Cursor {
public:
    Cursor(std::string_view bytes, std::string what) : bytes_(bytes), what_(std::move(what)) {}

    template <typename T>
    T get()
    {
        need(sizeof(T));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            v |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
        pos_ += sizeof(T);
        return static_cast<T>(v);
    }

    std::string_view take(std::size_t len)
    {
        need(len);
        auto out = bytes_.substr(pos_, len);
        pos_ += len;
        return out;
    }

    bool at_end() const noexcept { return pos_ == bytes_.size(); }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    [[noreturn]] void fail(const std::string& why) const
    {
        throw IndexCorruptError(what_ + ": " + why + " at byte " + std::to_string(pos_));
    }

private:
    void need(std::size_t len) const
    {
        if (bytes_.size() - pos_ < len)
            fail("truncated");
    }

    std::string_view bytes_;
    std::string what_;
    std::size_t pos_ = 0;
};

} // namespace era::binary
