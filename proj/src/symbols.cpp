#include "lzhmm/symbols.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "lzhmm/error.hpp"

namespace lzhmm {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw ModelError("alphabet must not be empty");
    if (symbols_.size() > std::numeric_limits<std::uint16_t>::max())
        throw ModelError("alphabet has more than 65535 symbols");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i].empty()) throw ModelError("alphabet symbol " + std::to_string(i) + " is empty");
        auto [it, inserted] = index_.emplace(symbols_[i], static_cast<Symbol>(i));
        if (!inserted) throw ModelError("duplicate alphabet symbol '" + symbols_[i] + "'");
    }
}

bool Alphabet::contains(std::string_view token) const {
    return index_.find(std::string(token)) != index_.end();
}

Symbol Alphabet::index_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) throw ModelError("symbol '" + std::string(token) + "' is not in the alphabet");
    return it->second;
}

bool Alphabet::single_byte() const noexcept {
    return std::all_of(symbols_.begin(), symbols_.end(), [](const std::string& s) { return s.size() == 1; });
}

void check_symbols(std::span<const Symbol> x, std::size_t alphabet_size) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] >= alphabet_size)
            throw ModelError("symbol at position " + std::to_string(i) + " is outside the alphabet");
    }
}

SymbolSeq parse_symbol_text(std::string_view text, const Alphabet& alphabet) {
    SymbolSeq out;
    if (alphabet.single_byte()) {
        std::array<int, 256> lookup;
        lookup.fill(-1);
        for (Symbol s = 0; s < alphabet.size(); ++s)
            lookup[static_cast<unsigned char>(alphabet[s][0])] = static_cast<int>(s);
        out.reserve(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            int s = lookup[static_cast<unsigned char>(text[i])];
            if (s < 0)
                throw ModelError("byte " + std::to_string(static_cast<unsigned char>(text[i])) + " at offset " +
                                 std::to_string(i) + " is not in the alphabet");
            out.push_back(static_cast<Symbol>(s));
        }
        return out;
    }
    std::size_t line = 1;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view token = text.substr(pos, end - pos);
        if (!alphabet.contains(token))
            throw ModelError("line " + std::to_string(line) + ": token '" + std::string(token) +
                             "' is not in the alphabet");
        out.push_back(alphabet.index_of(token));
        pos = end + 1;
        ++line;
    }
    return out;
}

std::string format_symbol_text(std::span<const Symbol> x, const Alphabet& alphabet) {
    std::string out;
    const bool contiguous = alphabet.single_byte();
    for (Symbol s : x) {
        out += alphabet[s];
        if (!contiguous) out += '\n';
    }
    return out;
}

Alphabet byte_alphabet_of(std::string_view text) {
    std::array<bool, 256> seen{};
    for (char c : text) seen[static_cast<unsigned char>(c)] = true;
    std::vector<std::string> symbols;
    for (int b = 0; b < 256; ++b)
        if (seen[b]) symbols.emplace_back(1, static_cast<char>(b));
    // An empty input still needs a valid (nonempty) alphabet for the container.
    if (symbols.empty()) symbols.emplace_back("0");
    return Alphabet(std::move(symbols));
}

} // namespace lzhmm
