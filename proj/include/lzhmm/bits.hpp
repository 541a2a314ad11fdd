#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lzhmm/symbols.hpp"

namespace lzhmm {

// Exact-length bit sequence, most significant bit first within each byte.
class BitString {
public:
    BitString() = default;

    // Parses a string of '0'/'1' characters.
    static BitString from_string(std::string_view bits);
    static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_length);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    bool operator[](std::size_t i) const noexcept { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u; }

    void push_back(bool bit);
    // Low `width` bits of `value`, most significant first. width <= 64.
    void append_bits(std::uint64_t value, unsigned width);
    void append(const BitString& other);

    std::string to_string() const;
    // Packed bytes; the final byte is zero-padded.
    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

    bool starts_with(const BitString& prefix) const;

    friend bool operator==(const BitString& a, const BitString& b) {
        return a.size_ == b.size_ && a.bytes_ == b.bytes_;
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t size_ = 0;
};

// Cursor over a BitString. Reads past the end throw DecodeError with the cursor offset.
class BitReader {
public:
    explicit BitReader(const BitString& bits, std::size_t position = 0) : bits_(&bits), pos_(position) {}

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bits_->size() - pos_; }
    bool at_end() const noexcept { return pos_ >= bits_->size(); }

    bool read_bit();
    std::uint64_t read_bits(unsigned width);

private:
    const BitString* bits_;
    std::size_t pos_;
};

// Elias delta code of i >= 1: (G-1) zeros, N in G bits, then the low N-1 bits of i,
// where N = bit length of i and G = bit length of N.
BitString uint_code(std::uint64_t i);
void append_uint_code(BitString& out, std::uint64_t i);
std::size_t uint_code_length(std::uint64_t i);
std::uint64_t uint_decode(BitReader& reader);

// Fixed-width code for Σ ∪ {λ}: symbol index, λ as index |Σ|, in ℓ = ⌈log2(|Σ|+1)⌉ bits.
class SymbolCodec {
public:
    explicit SymbolCodec(std::size_t alphabet_size);

    std::size_t alphabet_size() const noexcept { return alphabet_size_; }
    unsigned width() const noexcept { return width_; }
    std::uint64_t lambda_index() const noexcept { return alphabet_size_; }

    // nullopt is λ.
    void encode(BitString& out, std::optional<Symbol> symbol) const;
    BitString encode(std::optional<Symbol> symbol) const;
    std::optional<Symbol> decode(BitReader& reader) const;

private:
    std::size_t alphabet_size_;
    unsigned width_;
};

} // namespace lzhmm
