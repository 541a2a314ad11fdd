#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lzhmm/bits.hpp"
#include "lzhmm/symbols.hpp"

namespace lzhmm {

// Phrase i (1-based) is σ_i = σ_ref ∘ symbol, with ref < i and σ_0 = λ.
// A missing symbol is λ and may only occur on the final phrase.
struct LzPhrase {
    std::uint64_t ref = 0;
    std::optional<Symbol> symbol;

    friend bool operator==(const LzPhrase&, const LzPhrase&) = default;
};

struct LzParse {
    std::vector<LzPhrase> phrases;

    std::size_t size() const noexcept { return phrases.size(); }
    // True when the last phrase ends with a symbol (so all phrases are distinct).
    bool final_phrase_complete() const noexcept { return phrases.empty() || phrases.back().symbol.has_value(); }
};

// Greedy parse: each phrase is the shortest unseen prefix of the remaining input.
// A leftover suffix equal to an earlier phrase becomes (ref, λ).
LzParse lz_parse(std::span<const Symbol> x, std::size_t alphabet_size);

// Rebuilds the symbol sequence from a parse (validating back-references).
SymbolSeq lz_expand(const LzParse& parse, std::size_t alphabet_size);

// Per phrase: uint_code(ref + 1) then the ℓ-bit symbol code.
BitString lz_encode(std::span<const Symbol> x, std::size_t alphabet_size);
BitString lz_encode(const LzParse& parse, std::size_t alphabet_size);

// Reads phrases until n symbols are produced. The reader-based overload leaves the cursor after the
// last phrase; the BitString overload also requires the stream to be fully consumed.
SymbolSeq lz_decode(BitReader& reader, std::size_t alphabet_size, std::size_t n);
SymbolSeq lz_decode(const BitString& bits, std::size_t alphabet_size, std::size_t n);

} // namespace lzhmm
