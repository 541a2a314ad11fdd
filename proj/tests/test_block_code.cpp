#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "lzhmm/block_code.hpp"
#include "lzhmm/entropy.hpp"
#include "lzhmm/error.hpp"
#include "lzhmm/markov.hpp"
#include "support/test_models.hpp"

using namespace lzhmm;

namespace {

BlockDistribution manual(std::vector<double> probs, std::size_t L = 1, std::size_t alphabet_size = 0) {
    BlockDistribution d;
    d.L = L;
    d.alphabet_size = alphabet_size ? alphabet_size : probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (probs[i] > 0) d.probs.emplace_back(i, probs[i]);
    return d;
}

Alphabet letters(std::size_t n) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(std::string(1, static_cast<char>('a' + i)));
    return Alphabet(s);
}

std::string codeword_of(const BlockCode& code, std::uint64_t block) {
    const CodeEntry* e = code.find(block);
    REQUIRE(e != nullptr);
    return e->codeword.to_string();
}

// Prefix-freeness by comparing every pair of codewords.
bool pairwise_prefix_free(const BlockCode& code) {
    const auto& es = code.entries();
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = 0; j < es.size(); ++j)
            if (i != j && es[j].codeword.starts_with(es[i].codeword)) return false;
    return true;
}

} // namespace

TEST_CASE("shannon code examples") {
    const auto a = build_shannon_code(manual({0.5, 0.25, 0.25}), letters(3));
    CHECK(codeword_of(a, 0) == "0");
    CHECK(codeword_of(a, 1) == "10");
    CHECK(codeword_of(a, 2) == "11");

    const auto u = build_shannon_code(manual({0.25, 0.25, 0.25, 0.25}), letters(4));
    for (std::uint64_t b = 0; b < 4; ++b) CHECK(u.find(b)->codeword.size() == 2);

    const auto s = build_shannon_code(manual({0.9, 0.1}), letters(2));
    CHECK(s.find(0)->codeword.size() == 1);
    CHECK(s.find(1)->codeword.size() == 4);
    CHECK(check_block_code(s).kraft_sum == doctest::Approx(0.5 + 1.0 / 16));

    CHECK(shannon_length(1.0) == 0);
    CHECK(shannon_length(0.5) == 1);
    CHECK(shannon_length(0.1) == 4);
    CHECK(shannon_length(0.125) == 3);
    CHECK(shannon_length(0.126) == 3);
    CHECK(shannon_length(0.124) == 4);
}

TEST_CASE("canonical assignment orders by length then block") {
    const auto c = build_shannon_code(manual({0.1, 0.4, 0.1, 0.4}), letters(4));
    std::vector<std::uint64_t> order;
    for (const auto& e : c.entries()) order.push_back(e.block);
    CHECK(order == std::vector<std::uint64_t>{1, 3, 0, 2});
    CHECK(codeword_of(c, 1) == "00");
    CHECK(codeword_of(c, 3) == "01");
    CHECK(codeword_of(c, 0) == "1000");
    CHECK(codeword_of(c, 2) == "1001");
}

TEST_CASE("code invariants over the model matrix") {
    for (const auto& [name, hmm] : models::all_models()) {
        const std::size_t max_L = hmm.alphabet().size() == 2 ? 16 : 8;
        for (std::size_t L = 1; L <= max_L; ++L) {
            CAPTURE(name);
            CAPTURE(L);
            const auto dist = block_distribution(hmm, L);
            const auto code = build_shannon_code(dist, hmm.alphabet());
            const auto report = check_block_code(code);
            CHECK(report.prefix_free);
            CHECK(report.per_codeword_bound);
            CHECK(report.kraft_sum <= 1.0 + 1e-12);
            REQUIRE(code.entries().size() == dist.probs.size());
            if (code.entries().size() <= 300) CHECK(pairwise_prefix_free(code));
            for (const auto& e : code.entries())
                REQUIRE(static_cast<double>(e.codeword.size()) <= 1 + std::log2(1 / e.probability) + 1e-12);
            CHECK(code.expected_length() <= block_entropy(dist) + 1 + 1e-9);
        }
    }
}

TEST_CASE("ih_encode examples") {
    const auto point = build_shannon_code(manual({0.0, 1.0, 0.0, 0.0}, 2, 2), letters(2));
    REQUIRE(point.entries().size() == 1);
    CHECK(point.find(1)->codeword.empty());
    CHECK(ih_encode(SymbolSeq{0, 1, 0, 1, 0, 1}, point).empty());
    CHECK(ih_decode(BitString{}, point, 6) == SymbolSeq{0, 1, 0, 1, 0, 1});

    const auto skew = build_shannon_code(manual({0.6, 0.3, 0.1}), letters(3));
    CHECK(codeword_of(skew, 0) == "0");
    CHECK(ih_encode(SymbolSeq{0, 0, 0}, skew).to_string() == "000");

    const auto fair = build_shannon_code(manual({0.5, 0.5}), letters(2));
    CHECK(ih_encode(SymbolSeq{0, 1}, fair).to_string() == "01");

    CHECK(ih_encode(SymbolSeq{}, fair).empty());
    CHECK(ih_decode(BitString{}, fair, 0).empty());
}

TEST_CASE("iid uniform binary at L=8 is fixed-length") {
    const auto hmm = models::iid_uniform_binary();
    const auto code = build_shannon_code(block_distribution(hmm, 8), hmm.alphabet());
    for (const auto& e : code.entries()) CHECK(e.codeword.size() == 8);
    const std::size_t n = 1000000 / 8 * 8;
    const auto path = sample_path(hmm, n, 11);
    const auto bits = ih_encode(path.symbols, code);
    CHECK(bits.size() == n);
    CHECK(ih_decode(bits, code, n) == path.symbols);
}

TEST_CASE("ih errors") {
    const auto hmm = models::golden_mean();
    const auto code = build_shannon_code(block_distribution(hmm, 2), hmm.alphabet());
    CHECK(code.find(3) == nullptr);
    try {
        ih_encode(SymbolSeq{0, 1, 1, 0, 1, 1}, code);
        FAIL("expected UnencodableBlock");
    } catch (const UnencodableBlock& e) {
        CHECK(e.block_index() == 2);
    }
    CHECK_THROWS_AS(ih_encode(SymbolSeq{0, 1, 0}, code), Error);

    const auto fair = build_shannon_code(manual({0.25, 0.25, 0.25, 0.25}, 1, 4), letters(4));
    // Two full codewords plus a dangling bit.
    try {
        ih_decode(BitString::from_string("00011"), fair, 3);
        FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
        CHECK(e.bit_offset() == 4);
    }
    CHECK_THROWS_AS(ih_decode(BitString::from_string("000110"), fair, 2), DecodeError);

    // A bit pattern outside the code tree.
    const auto partial = build_shannon_code(manual({0.5, 0.25}), letters(2));
    CHECK_THROWS_AS(ih_decode(BitString::from_string("11"), partial, 1), DecodeError);
}

TEST_CASE("fingerprint depends on the codebook") {
    const auto flip = models::flip_chain(0.1);
    const auto a = build_shannon_code(block_distribution(flip, 4), flip.alphabet());
    const auto b = build_shannon_code(block_distribution(flip, 4), flip.alphabet());
    const auto c = build_shannon_code(block_distribution(flip, 5), flip.alphabet());
    const auto other = models::flip_chain(0.3);
    const auto d = build_shannon_code(block_distribution(other, 4), other.alphabet());
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
    CHECK(a.fingerprint() != d.fingerprint());
    CHECK(a.fingerprint() == codebook_fingerprint(4, flip.alphabet(), a.entries()));
}

TEST_CASE("roundtrip and empirical rate on stationary samples") {
    const std::size_t n = 1000000;
    std::uint64_t seed = 300;
    for (const auto& [name, hmm] : models::all_models()) {
        const std::size_t L = hmm.alphabet().size() == 2 ? 8 : 4;
        CAPTURE(name);
        const auto code = build_shannon_code(block_distribution(hmm, L), hmm.alphabet());
        const auto path = sample_path(hmm, n, seed++);
        const auto bits = ih_encode(path.symbols, code);
        CHECK(ih_decode(bits, code, n) == path.symbols);
        const double observed = static_cast<double>(bits.size()) / static_cast<double>(n);
        CHECK(std::abs(observed - code.expected_length() / static_cast<double>(L)) <= 0.01);
    }
}
