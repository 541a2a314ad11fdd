#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <span>

#include "lzhmm/entropy.hpp"
#include "lzhmm/error.hpp"
#include "support/oracles.hpp"
#include "support/test_models.hpp"

using namespace lzhmm;

namespace {

BlockDistribution manual(std::vector<double> probs, std::size_t alphabet_size = 0) {
    BlockDistribution d;
    d.L = 1;
    d.alphabet_size = alphabet_size ? alphabet_size : probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) d.probs.emplace_back(i, probs[i]);
    return d;
}

std::size_t max_length_for(const HiddenMarkovModel& hmm) { return hmm.alphabet().size() == 2 ? 12 : 8; }

} // namespace

namespace {

// max over row pairs of the total variation distance.
double dobrushin(const Matrix& m) {
    double worst = 0.0;
    for (std::size_t a = 0; a < m.rows(); ++a)
        for (std::size_t b = 0; b < m.rows(); ++b) {
            double d = 0.0;
            for (std::size_t c = 0; c < m.cols(); ++c) d += std::abs(m(a, c) - m(b, c));
            worst = std::max(worst, d / 2);
        }
    return worst;
}

} // namespace

TEST_CASE("block_distribution: reference cases") {
    SUBCASE("iid uniform binary, L = 3") {
        const auto d = block_distribution(models::iid_uniform_binary(), 3);
        REQUIRE(d.probs.size() == 8);
        for (const auto& [block, p] : d.probs) CHECK(p == 0.125);
    }
    SUBCASE("visible chain, L = 2: P(ab) = Π(a) M[a][b]") {
        const auto hmm = models::make({{0.9, 0.1}, {0.2, 0.8}}, {"a", "b"}, {{1, 0}, {0, 1}});
        const auto d = block_distribution(hmm, 2);
        CHECK(*d.probability(block_index(SymbolSeq{0, 1}, 2)) == doctest::Approx(2.0 / 3.0 * 0.1).epsilon(1e-14));
        CHECK(*d.probability(block_index(SymbolSeq{1, 0}, 2)) == doctest::Approx(1.0 / 3.0 * 0.2).epsilon(1e-14));
        CHECK(*d.probability(block_index(SymbolSeq{1, 1}, 2)) == doctest::Approx(1.0 / 3.0 * 0.8).epsilon(1e-14));
    }
    SUBCASE("L = 1 is the stationary emission marginal") {
        const auto hmm = models::hidden_binary();
        const auto d = block_distribution(hmm, 1);
        for (Symbol x = 0; x < 2; ++x) {
            double expected = 0.0;
            for (std::size_t z = 0; z < 3; ++z) expected += hmm.stationary()[z] * hmm.emissions()(z, x);
            CHECK(*d.probability(x) == doctest::Approx(expected).epsilon(1e-14));
        }
    }
    SUBCASE("zero-probability blocks are omitted") {
        const auto d = block_distribution(models::golden_mean(), 2);
        CHECK(d.probs.size() == 3);
        CHECK_FALSE(d.probability(block_index(SymbolSeq{1, 1}, 2)).has_value());
    }
}

TEST_CASE("block_distribution agrees with state-path enumeration") {
    for (const auto& [name, hmm] : models::all_models()) {
        CAPTURE(name);
        const std::size_t max_len = hmm.alphabet().size() == 2 ? 6 : 4;
        for (std::size_t L = 1; L <= max_len; ++L) {
            const auto d = block_distribution(hmm, L);
            const auto reference = oracle::enumerate_blocks(hmm, L);
            REQUIRE(d.probs.size() == reference.size());
            for (const auto& [gamma, p] : reference)
                CHECK(std::abs(*d.probability(block_index(gamma, hmm.alphabet().size())) - p) <= 1e-13);
        }
    }
}

TEST_CASE("block distributions normalize and marginalize") {
    for (const auto& [name, hmm] : models::all_models()) {
        CAPTURE(name);
        const std::size_t sigma = hmm.alphabet().size();
        BlockDistribution prev;
        for (std::size_t L = 1; L <= max_length_for(hmm); ++L) {
            const auto d = block_distribution(hmm, L);
            CHECK(std::abs(d.total() - 1.0) <= 1e-9);
            for (const auto& [block, p] : d.probs) CHECK((p > 0.0 && p <= 1.0));
            if (L > 1) {
                // Σ_b P_L(γ' b) = P_{L-1}(γ')
                std::vector<double> folded(prev.probs.size(), 0.0);
                for (const auto& [block, p] : d.probs) {
                    auto it = std::lower_bound(prev.probs.begin(), prev.probs.end(), block / sigma,
                                               [](const auto& e, std::uint64_t b) { return e.first < b; });
                    REQUIRE(it != prev.probs.end());
                    folded[static_cast<std::size_t>(it - prev.probs.begin())] += p;
                }
                for (std::size_t i = 0; i < folded.size(); ++i) CHECK(std::abs(folded[i] - prev.probs[i].second) <= 1e-9);
            }
            prev = d;
        }
    }
}

TEST_CASE("block_distribution cap") {
    CHECK_THROWS_AS(block_distribution(models::iid_uniform_binary(), 25), CapacityError);
    CHECK_THROWS_AS(block_distribution(models::iid_uniform_binary(), 10, 512), CapacityError);
    CHECK_NOTHROW(block_distribution(models::iid_uniform_binary(), 9, 512));
    CHECK_THROWS_AS(entropy_rate_estimates(models::quaternary_hidden(), 13), CapacityError);
}

TEST_CASE("block_entropy") {
    for (std::size_t L = 1; L <= 10; ++L)
        CHECK(block_entropy(block_distribution(models::iid_uniform_binary(), L)) == doctest::Approx(L).epsilon(1e-12));
    CHECK(block_entropy(manual({0.5, 0.25, 0.25})) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(block_entropy(manual({1.0})) == 0.0);
}

TEST_CASE("entropy_rate_estimates") {
    SUBCASE("iid uniform binary") {
        const auto est = entropy_rate_estimates(models::iid_uniform_binary(), 10);
        for (std::size_t i = 0; i < 10; ++i) {
            CHECK(est.per_symbol[i] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(est.increment[i] == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("flip chain p = 0.1") {
        const double h = oracle::binary_entropy(0.1);
        CHECK(h == doctest::Approx(0.46899559358928).epsilon(1e-12));
        const auto est = entropy_rate_estimates(models::flip_chain(0.1), 12);
        for (std::size_t L = 2; L <= 12; ++L) {
            CHECK(std::abs(est.increment[L - 1] - 0.46899) <= 1e-5);
            CHECK(std::abs(est.increment[L - 1] - h) <= 1e-9);
            CHECK(std::abs(est.per_symbol[L - 1] - (1.0 + (L - 1) * h) / L) <= 1e-9);
        }
    }
    SUBCASE("shared walk reproduces per-L block entropies") {
        for (const auto& [name, hmm] : models::all_models()) {
            CAPTURE(name);
            const auto est = entropy_rate_estimates(hmm, max_length_for(hmm));
            for (std::size_t L = 1; L <= est.max_length(); ++L)
                CHECK(std::abs(est.block_entropy[L - 1] - block_entropy(block_distribution(hmm, L))) <= 1e-12);
        }
    }
}

TEST_CASE("rate estimate invariants hold for every test model") {
    for (const auto& [name, hmm] : models::all_models()) {
        CAPTURE(name);
        const auto est = entropy_rate_estimates(hmm, max_length_for(hmm));
        const double log_sigma = std::log2(static_cast<double>(hmm.alphabet().size()));
        for (std::size_t L = 1; L <= est.max_length(); ++L) {
            CHECK(est.block_entropy[L - 1] >= 0.0);
            CHECK(est.block_entropy[L - 1] <= L * log_sigma + 1e-9);
            if (L > 1) {
                CHECK(est.per_symbol[L - 1] <= est.per_symbol[L - 2] + 1e-9);
                CHECK(est.increment[L - 1] <= est.increment[L - 2] + 1e-9);
            }
        }
        if (hmm.state_revealing()) {
            const double rate = markov_entropy_rate(hmm.chain());
            for (std::size_t L = 2; L <= est.max_length(); ++L) CHECK(std::abs(est.increment[L - 1] - rate) <= 1e-9);
        }
    }
}

TEST_CASE("markov_entropy_rate") {
    CHECK(markov_entropy_rate(models::flip_chain(0.5).chain()) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(markov_entropy_rate(models::flip_chain(0.1).chain()) - 0.46899) <= 1e-5);
    // The deterministic row (1, 0) of the golden-mean chain contributes nothing: rate = Π(0) h(0.5) = 2/3.
    CHECK(markov_entropy_rate(models::golden_mean().chain()) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const auto ref = reference_rate(models::flip_chain(0.1), 8);
    CHECK(ref.exact);
    const auto hidden = reference_rate(models::hidden_binary(), 10);
    CHECK_FALSE(hidden.exact);
    CHECK(hidden.bits_per_symbol == doctest::Approx(entropy_rate_estimates(models::hidden_binary(), 10).increment.back()));
}

TEST_CASE("is_compressive") {
    const auto iid = models::iid_uniform_binary();
    const auto at10 = is_compressive(iid, 10, 0.1, 1.0);
    CHECK(at10.compressive);
    CHECK(at10.lhs == doctest::Approx(11.0));
    CHECK(at10.rhs == doctest::Approx(11.0));
    CHECK(at10.min_block_length == doctest::Approx(10.0));
    CHECK_FALSE(is_compressive(iid, 9, 0.1, 1.0).compressive);

    const auto flip = models::flip_chain(0.1);
    const double rate = markov_entropy_rate(flip.chain());
    for (std::size_t L = 1; L <= 12; ++L) CHECK(is_compressive(flip, L, 10.0, rate).compressive);
    CHECK_THROWS_AS(is_compressive(flip, 4, 0.0, rate), ModelError);
}

TEST_CASE("empirical block frequencies match P_L") {
    const std::size_t n = 1000000;
    for (const auto& [name, hmm] : models::all_models()) {
        CAPTURE(name);
        const auto path = sample_path(hmm, n, 977);
        const std::size_t sigma = hmm.alphabet().size();
        for (std::size_t L = 1; L <= 4; ++L) {
            CAPTURE(L);
            const auto d = block_distribution(hmm, L);
            // Consecutive blocks are dependent; shrink the sample size by the lag-L contraction factor.
            const double mix = dobrushin(l_step_matrix(hmm.chain(), L));
            REQUIRE(mix < 1.0);
            const double effective = static_cast<double>(n / L) * (1.0 - mix) / (1.0 + mix);
            std::map<std::uint64_t, double> counts;
            const std::size_t blocks = n / L;
            for (std::size_t i = 0; i < blocks; ++i)
                counts[block_index(std::span(path.symbols).subspan(i * L, L), sigma)] += 1.0;
            for (const auto& [block, p] : d.probs) {
                const double freq = counts[block] / static_cast<double>(blocks);
                CHECK(std::abs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / effective) + 1e-3);
            }
        }
    }
}
