#include "lzhmm/lz.hpp"

#include <algorithm>
#include <unordered_map>

#include "lzhmm/error.hpp"

namespace lzhmm {

namespace {

// Phrase trie: node i is phrase σ_i, node 0 is λ.
class PhraseTrie {
public:
    explicit PhraseTrie(std::size_t alphabet_size) : sigma_(alphabet_size) {}

    std::optional<std::uint64_t> child(std::uint64_t node, Symbol s) const {
        auto it = edges_.find(node * sigma_ + s);
        if (it == edges_.end()) return std::nullopt;
        return it->second;
    }

    void insert(std::uint64_t node, Symbol s, std::uint64_t id) { edges_.emplace(node * sigma_ + s, id); }

    void reserve(std::size_t n) { edges_.reserve(n); }

private:
    std::uint64_t sigma_;
    std::unordered_map<std::uint64_t, std::uint64_t> edges_;
};

} // namespace

LzParse lz_parse(std::span<const Symbol> x, std::size_t alphabet_size) {
    if (alphabet_size == 0) throw Error("alphabet must not be empty");
    check_symbols(x, alphabet_size);
    LzParse parse;
    PhraseTrie trie(alphabet_size);
    trie.reserve(x.size() / 4 + 16);
    std::uint64_t node = 0;
    for (Symbol s : x) {
        if (auto next = trie.child(node, s)) {
            node = *next;
            continue;
        }
        const std::uint64_t id = parse.phrases.size() + 1;
        trie.insert(node, s, id);
        parse.phrases.push_back({node, s});
        node = 0;
    }
    if (node != 0) parse.phrases.push_back({node, std::nullopt});
    return parse;
}

SymbolSeq lz_expand(const LzParse& parse, std::size_t alphabet_size) {
    // (parent, symbol, length) per phrase; phrase 0 is λ.
    std::vector<std::uint64_t> parent{0};
    std::vector<Symbol> last{0};
    std::vector<std::uint64_t> length{0};
    SymbolSeq out;
    for (std::size_t i = 0; i < parse.phrases.size(); ++i) {
        const LzPhrase& ph = parse.phrases[i];
        const std::uint64_t id = i + 1;
        if (ph.ref >= id) throw Error("phrase " + std::to_string(id) + " references later phrase " + std::to_string(ph.ref));
        if (!ph.symbol && i + 1 != parse.phrases.size()) throw Error("λ terminator on a non-final phrase");
        if (ph.symbol && *ph.symbol >= alphabet_size) throw Error("phrase symbol outside the alphabet");
        const std::size_t start = out.size();
        out.resize(start + length[ph.ref] + (ph.symbol ? 1 : 0));
        std::size_t pos = start + length[ph.ref];
        if (ph.symbol) out[pos] = *ph.symbol;
        for (std::uint64_t node = ph.ref; node != 0; node = parent[node]) out[--pos] = last[node];
        parent.push_back(ph.ref);
        last.push_back(ph.symbol.value_or(0));
        length.push_back(length[ph.ref] + (ph.symbol ? 1 : 0));
    }
    return out;
}

BitString lz_encode(const LzParse& parse, std::size_t alphabet_size) {
    const SymbolCodec codec(alphabet_size);
    BitString out;
    for (const LzPhrase& ph : parse.phrases) {
        append_uint_code(out, ph.ref + 1);
        codec.encode(out, ph.symbol);
    }
    return out;
}

BitString lz_encode(std::span<const Symbol> x, std::size_t alphabet_size) {
    return lz_encode(lz_parse(x, alphabet_size), alphabet_size);
}

SymbolSeq lz_decode(BitReader& reader, std::size_t alphabet_size, std::size_t n) {
    const SymbolCodec codec(alphabet_size);
    std::vector<std::uint64_t> parent{0};
    std::vector<Symbol> last{0};
    std::vector<std::uint64_t> length{0};
    SymbolSeq out;
    out.reserve(n);
    while (out.size() < n) {
        const std::size_t phrase_start = reader.position();
        const std::uint64_t id = parent.size();
        const std::uint64_t ref = uint_decode(reader) - 1;
        if (ref >= id)
            throw DecodeError("phrase " + std::to_string(id) + " references phrase " + std::to_string(ref), phrase_start);
        const std::optional<Symbol> symbol = codec.decode(reader);
        const std::uint64_t len = length[ref] + (symbol ? 1 : 0);
        if (len == 0) throw DecodeError("empty phrase", phrase_start);
        if (out.size() + len > n)
            throw DecodeError("decoded length exceeds the declared " + std::to_string(n) + " symbols", phrase_start);
        if (!symbol && out.size() + len != n) throw DecodeError("λ terminator on a non-final phrase", phrase_start);
        const std::size_t start = out.size();
        out.resize(start + len);
        std::size_t pos = start + length[ref];
        if (symbol) out[pos] = *symbol;
        for (std::uint64_t node = ref; node != 0; node = parent[node]) out[--pos] = last[node];
        parent.push_back(ref);
        last.push_back(symbol.value_or(0));
        length.push_back(len);
    }
    return out;
}

SymbolSeq lz_decode(const BitString& bits, std::size_t alphabet_size, std::size_t n) {
    BitReader reader(bits);
    SymbolSeq out = lz_decode(reader, alphabet_size, n);
    if (!reader.at_end()) throw DecodeError("trailing bits after the last phrase", reader.position());
    return out;
}

} // namespace lzhmm
