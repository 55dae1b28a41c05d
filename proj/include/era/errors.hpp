#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace era {

// Root of every error raised by the library. Callers that only care about
// "something went wrong with this input" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

// A symbol outside 1..sigma, or an alphabet size outside 2..255.
class AlphabetError : public Error {
public:
    using Error::Error;
};

// The delimiter byte appeared somewhere other than the final position.
class DelimiterError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// The text is too repetitive for prefix partitioning to separate suffixes
// within the configured prefix length: some prefix is still too frequent
// (vertical phase) or some group of suffixes is still tied (horizontal phase)
// past max_prefix_len symbols.
class SkewedInputError : public Error {
public:
    SkewedInputError(std::string prefix, std::uint64_t frequency);

    const std::string& prefix() const noexcept { return prefix_; }
    std::uint64_t frequency() const noexcept { return frequency_; }

private:
    std::string prefix_;
    std::uint64_t frequency_;
};

// Raised by the horizontal phase when a worker fails; names the prefix that
// was being processed.
class BuildError : public Error {
public:
    BuildError(std::string prefix, const std::string& what);

    const std::string& prefix() const noexcept { return prefix_; }

private:
    std::string prefix_;
};

class CorruptArraysError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class IndexCorruptError : public Error {
public:
    using Error::Error;
};

// Broken internal invariant (duplicate trie entry and the like). Never
// expected on valid inputs.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace era
