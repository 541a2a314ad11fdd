#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lzhmm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structural problems with a chain, model, or argument.
class ModelError : public Error {
public:
    using Error::Error;
};

// |Σ|^L (or similar enumerations) above the configured cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Malformed or truncated bit stream. Carries the bit offset where decoding stopped.
class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::size_t bit_offset)
        : Error(what + " (at bit " + std::to_string(bit_offset) + ")"), bit_offset_(bit_offset) {}

    std::size_t bit_offset() const noexcept { return bit_offset_; }

private:
    std::size_t bit_offset_;
};

// A block with zero model probability reached the block encoder.
class UnencodableBlock : public Error {
public:
    UnencodableBlock(std::size_t block_index)
        : Error("unencodable block #" + std::to_string(block_index) + ": zero model probability"),
          block_index_(block_index) {}

    std::size_t block_index() const noexcept { return block_index_; }

private:
    std::size_t block_index_;
};

} // namespace lzhmm
