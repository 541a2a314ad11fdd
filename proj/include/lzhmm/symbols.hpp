#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lzhmm {

using Symbol = std::uint32_t;
using SymbolSeq = std::vector<Symbol>;

// Ordered list of distinct symbol tokens. Symbols are referred to by index everywhere else.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& operator[](Symbol s) const { return symbols_.at(s); }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }

    bool contains(std::string_view token) const;
    Symbol index_of(std::string_view token) const;

    // True when every symbol is exactly one byte; such alphabets use the contiguous text format.
    bool single_byte() const noexcept;

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, Symbol> index_;
};

// Throws ModelError naming the position of the first symbol >= alphabet_size.
void check_symbols(std::span<const Symbol> x, std::size_t alphabet_size);

// Symbol text format: contiguous characters for single-byte alphabets, otherwise one token per line.
SymbolSeq parse_symbol_text(std::string_view text, const Alphabet& alphabet);
std::string format_symbol_text(std::span<const Symbol> x, const Alphabet& alphabet);

// Alphabet made of the distinct bytes of `text`, in increasing byte order.
Alphabet byte_alphabet_of(std::string_view text);

} // namespace lzhmm
