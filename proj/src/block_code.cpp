#include "lzhmm/block_code.hpp"

#include <algorithm>
#include <cmath>

#include <zlib.h>

#include "lzhmm/error.hpp"

namespace lzhmm {

namespace {

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
    for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

} // namespace

unsigned shannon_length(double p) {
    if (!(p > 0.0) || p > 1.0) throw Error("Shannon length needs 0 < p <= 1");
    int len = std::max(0, static_cast<int>(std::ceil(-std::log2(p))));
    while (std::ldexp(1.0, -len) > p) ++len;
    while (len > 0 && std::ldexp(1.0, -(len - 1)) <= p) --len;
    return static_cast<unsigned>(len);
}

std::uint32_t codebook_fingerprint(std::size_t L, const Alphabet& alphabet, std::span<const CodeEntry> entries) {
    std::vector<std::uint8_t> buf;
    put_be(buf, L, 2);
    put_be(buf, alphabet.size(), 2);
    for (const std::string& s : alphabet.symbols()) {
        put_be(buf, s.size(), 2);
        buf.insert(buf.end(), s.begin(), s.end());
    }
    put_be(buf, entries.size(), 8);
    for (const CodeEntry& e : entries) {
        put_be(buf, e.block, 8);
        put_be(buf, e.codeword.size(), 2);
    }
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, buf.data(), static_cast<uInt>(buf.size()));
    return static_cast<std::uint32_t>(crc);
}

BlockCode::BlockCode(std::size_t L, Alphabet alphabet, std::vector<CodeEntry> canonical_entries)
    : L_(L), alphabet_(std::move(alphabet)), entries_(std::move(canonical_entries)) {
    if (L_ == 0) throw Error("block length must be positive");
    by_block_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) by_block_.emplace_back(entries_[i].block, i);
    std::sort(by_block_.begin(), by_block_.end());
    for (std::size_t i = 1; i < by_block_.size(); ++i)
        if (by_block_[i].first == by_block_[i - 1].first) throw Error("duplicate block in code table");
    fingerprint_ = codebook_fingerprint(L_, alphabet_, entries_);

    children_ = {-1, -1};
    leaves_ = {-1};
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const BitString& cw = entries_[i].codeword;
        std::size_t node = 0;
        for (std::size_t b = 0; b < cw.size(); ++b) {
            if (leaves_[node] >= 0) throw Error("code table is not prefix-free");
            std::int32_t& next = children_[2 * node + (cw[b] ? 1 : 0)];
            if (next < 0) {
                next = static_cast<std::int32_t>(leaves_.size());
                children_.insert(children_.end(), {-1, -1});
                leaves_.push_back(-1);
            }
            node = static_cast<std::size_t>(children_[2 * node + (cw[b] ? 1 : 0)]);
        }
        if (leaves_[node] >= 0 || children_[2 * node] >= 0 || children_[2 * node + 1] >= 0)
            throw Error("code table is not prefix-free");
        leaves_[node] = static_cast<std::int32_t>(i);
    }
}

const CodeEntry* BlockCode::find(std::uint64_t block) const {
    auto it = std::lower_bound(by_block_.begin(), by_block_.end(), std::make_pair(block, std::size_t{0}));
    if (it == by_block_.end() || it->first != block) return nullptr;
    return &entries_[it->second];
}

double BlockCode::expected_length() const {
    double sum = 0.0;
    for (const CodeEntry& e : entries_) sum += e.probability * static_cast<double>(e.codeword.size());
    return sum;
}

BlockCode build_shannon_code(const BlockDistribution& dist, const Alphabet& alphabet) {
    if (dist.alphabet_size != alphabet.size()) throw Error("distribution and alphabet sizes differ");
    std::vector<std::pair<unsigned, std::size_t>> order;  // (length, position in dist.probs)
    order.reserve(dist.probs.size());
    for (std::size_t i = 0; i < dist.probs.size(); ++i) order.emplace_back(shannon_length(dist.probs[i].second), i);
    // dist.probs is sorted by block, so a stable sort on length gives (length, block) order.
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<CodeEntry> entries;
    entries.reserve(order.size());
    std::vector<std::uint8_t> code;  // current codeword, MSB first
    for (std::size_t i = 0; i < order.size(); ++i) {
        const unsigned len = order[i].first;
        if (i > 0) {
            // code += 1
            std::size_t pos = code.size();
            while (pos > 0 && code[pos - 1] == 1) code[--pos] = 0;
            if (pos == 0) throw Error("codeword lengths violate the Kraft inequality");
            code[pos - 1] = 1;
        }
        code.resize(len, 0);
        CodeEntry e;
        e.block = dist.probs[order[i].second].first;
        e.probability = dist.probs[order[i].second].second;
        for (std::uint8_t bit : code) e.codeword.push_back(bit != 0);
        entries.push_back(std::move(e));
    }
    return BlockCode(dist.L, alphabet, std::move(entries));
}

KraftReport check_block_code(const BlockCode& code) {
    KraftReport r;
    std::vector<const BitString*> words;
    for (const CodeEntry& e : code.entries()) {
        r.kraft_sum += std::ldexp(1.0, -static_cast<int>(e.codeword.size()));
        if (static_cast<double>(e.codeword.size()) > 1.0 + std::log2(1.0 / e.probability)) r.per_codeword_bound = false;
        words.push_back(&e.codeword);
    }
    // In lexicographic order any prefix relation shows up between neighbors.
    std::sort(words.begin(), words.end(), [](const BitString* a, const BitString* b) {
        const std::size_t n = std::min(a->size(), b->size());
        for (std::size_t i = 0; i < n; ++i)
            if ((*a)[i] != (*b)[i]) return (*a)[i] < (*b)[i];
        return a->size() < b->size();
    });
    for (std::size_t i = 1; i < words.size(); ++i)
        if (words[i]->starts_with(*words[i - 1])) r.prefix_free = false;
    return r;
}

void ih_encode(std::span<const Symbol> x, const BlockCode& code, BitString& out) {
    const std::size_t L = code.block_length();
    const std::size_t sigma = code.alphabet().size();
    if (x.size() % L != 0)
        throw Error("input length " + std::to_string(x.size()) + " is not a multiple of L = " + std::to_string(L));
    check_symbols(x, sigma);
    for (std::size_t b = 0; b * L < x.size(); ++b) {
        const CodeEntry* e = code.find(block_index(x.subspan(b * L, L), sigma));
        if (!e) throw UnencodableBlock(b);
        out.append(e->codeword);
    }
}

BitString ih_encode(std::span<const Symbol> x, const BlockCode& code) {
    BitString out;
    ih_encode(x, code, out);
    return out;
}

SymbolSeq ih_decode(BitReader& reader, const BlockCode& code, std::size_t n) {
    const std::size_t L = code.block_length();
    if (n % L != 0) throw Error("length " + std::to_string(n) + " is not a multiple of L = " + std::to_string(L));
    const auto& children = code.trie_children();
    const auto& leaves = code.trie_leaves();
    SymbolSeq out;
    out.reserve(n);
    for (std::size_t b = 0; b < n / L; ++b) {
        const std::size_t start = reader.position();
        std::size_t node = 0;
        while (leaves[node] < 0) {
            if (reader.at_end()) throw DecodeError("dangling partial codeword", start);
            const std::int32_t next = children[2 * node + (reader.read_bit() ? 1 : 0)];
            if (next < 0) throw DecodeError("bit pattern matches no codeword", start);
            node = static_cast<std::size_t>(next);
        }
        const SymbolSeq block = block_symbols(code.entries()[static_cast<std::size_t>(leaves[node])].block, L,
                                              code.alphabet().size());
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

SymbolSeq ih_decode(const BitString& bits, const BlockCode& code, std::size_t n) {
    BitReader reader(bits);
    SymbolSeq out = ih_decode(reader, code, n);
    if (!reader.at_end()) throw DecodeError("trailing bits after the last codeword", reader.position());
    return out;
}

} // namespace lzhmm
