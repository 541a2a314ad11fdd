#include "lzhmm/bits.hpp"

#include <bit>

#include "lzhmm/error.hpp"

namespace lzhmm {

BitString BitString::from_string(std::string_view bits) {
    BitString out;
    for (char c : bits) {
        if (c != '0' && c != '1') throw Error("bit string may contain only '0' and '1'");
        out.push_back(c == '1');
    }
    return out;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_length) {
    if (bit_length > bytes.size() * 8) throw Error("bit length exceeds the supplied bytes");
    BitString out;
    out.bytes_.assign(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>((bit_length + 7) / 8));
    out.size_ = bit_length;
    if (bit_length % 8 != 0) out.bytes_.back() &= static_cast<std::uint8_t>(0xFF << (8 - bit_length % 8));
    return out;
}

void BitString::push_back(bool bit) {
    if ((size_ & 7) == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (size_ & 7));
    ++size_;
}

void BitString::append_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) push_back((value >> i) & 1u);
}

void BitString::append(const BitString& other) {
    if ((size_ & 7) == 0) {
        bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
        size_ += other.size_;
        return;
    }
    for (std::size_t i = 0; i < other.size_; ++i) push_back(other[i]);
}

std::string BitString::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if ((*this)[i]) s[i] = '1';
    return s;
}

bool BitString::starts_with(const BitString& prefix) const {
    if (prefix.size_ > size_) return false;
    for (std::size_t i = 0; i < prefix.size_; ++i)
        if ((*this)[i] != prefix[i]) return false;
    return true;
}

bool BitReader::read_bit() {
    if (pos_ >= bits_->size()) throw DecodeError("unexpected end of bit stream", pos_);
    return (*bits_)[pos_++];
}

std::uint64_t BitReader::read_bits(unsigned width) {
    if (width > remaining()) throw DecodeError("unexpected end of bit stream", bits_->size());
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>((*bits_)[pos_++]);
    return v;
}

void append_uint_code(BitString& out, std::uint64_t i) {
    if (i == 0) throw Error("uint_code is defined for positive integers only");
    const auto n = static_cast<unsigned>(std::bit_width(i));
    const auto g = static_cast<unsigned>(std::bit_width(n));
    out.append_bits(0, g - 1);
    out.append_bits(n, g);
    out.append_bits(i, n - 1);
}

BitString uint_code(std::uint64_t i) {
    BitString out;
    append_uint_code(out, i);
    return out;
}

std::size_t uint_code_length(std::uint64_t i) {
    if (i == 0) throw Error("uint_code is defined for positive integers only");
    const auto n = static_cast<std::size_t>(std::bit_width(i));
    const auto g = static_cast<std::size_t>(std::bit_width(n));
    return 2 * g + n - 2;
}

std::uint64_t uint_decode(BitReader& reader) {
    const std::size_t start = reader.position();
    unsigned zeros = 0;
    while (!reader.read_bit()) {
        if (++zeros > 6) throw DecodeError("integer codeword longer than 64 bits", start);
    }
    // The 1 just read is the leading bit of N.
    std::uint64_t n = 1;
    if (zeros > reader.remaining()) throw DecodeError("truncated integer codeword", start);
    n = (n << zeros) | reader.read_bits(zeros);
    if (n > 64) throw DecodeError("integer codeword longer than 64 bits", start);
    if (n - 1 > reader.remaining()) throw DecodeError("truncated integer codeword", start);
    const std::uint64_t low = reader.read_bits(static_cast<unsigned>(n - 1));
    return (std::uint64_t{1} << (n - 1)) | low;
}

SymbolCodec::SymbolCodec(std::size_t alphabet_size)
    : alphabet_size_(alphabet_size), width_(static_cast<unsigned>(std::bit_width(alphabet_size))) {
    if (alphabet_size == 0) throw Error("symbol codec needs a nonempty alphabet");
}

void SymbolCodec::encode(BitString& out, std::optional<Symbol> symbol) const {
    std::uint64_t index = alphabet_size_;
    if (symbol) {
        if (*symbol >= alphabet_size_) throw Error("symbol index outside the alphabet");
        index = *symbol;
    }
    out.append_bits(index, width_);
}

BitString SymbolCodec::encode(std::optional<Symbol> symbol) const {
    BitString out;
    encode(out, symbol);
    return out;
}

std::optional<Symbol> SymbolCodec::decode(BitReader& reader) const {
    const std::size_t start = reader.position();
    const std::uint64_t index = reader.read_bits(width_);
    if (index == alphabet_size_) return std::nullopt;
    if (index > alphabet_size_) throw DecodeError("invalid symbol index " + std::to_string(index), start);
    return static_cast<Symbol>(index);
}

} // namespace lzhmm
