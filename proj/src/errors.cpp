#include "era/errors.hpp"

namespace era {

namespace {

std::string printable(const std::string& prefix)
{
    std::string out;
    for (unsigned char c : prefix) {
        if (!out.empty())
            out.push_back(' ');
        out += std::to_string(c);
    }
    return out;
}

} // namespace

SkewedInputError::SkewedInputError(std::string prefix, std::uint64_t frequency)
    : Error("skewed input: prefix of length " + std::to_string(prefix.size()) +
            " still occurs " + std::to_string(frequency) + " times [" + printable(prefix) + "]"),
      prefix_(std::move(prefix)),
      frequency_(frequency)
{
}

BuildError::BuildError(std::string prefix, const std::string& what)
    : Error("build failed on prefix [" + printable(prefix) + "]: " + what),
      prefix_(std::move(prefix))
{
}

} // namespace era
