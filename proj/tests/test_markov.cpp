#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lzhmm/error.hpp"
#include "lzhmm/markov.hpp"
#include "lzhmm/random.hpp"
#include "support/oracles.hpp"
#include "support/test_models.hpp"

using namespace lzhmm;

namespace {

MarkovChain chain(std::vector<std::vector<double>> rows) { return MarkovChain(Matrix::from_rows(rows)); }

MarkovChain random_dense_chain(SplitMix64& rng, std::size_t k) {
    Matrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) sum += (m(i, j) = 0.05 + rng.uniform());
        for (std::size_t j = 0; j < k; ++j) m(i, j) /= sum;
    }
    return MarkovChain(m);
}

double residual(const MarkovChain& c, const std::vector<double>& pi) {
    double worst = 0.0;
    for (std::size_t j = 0; j < c.states(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.states(); ++i) s += pi[i] * c.transitions()(i, j);
        worst = std::max(worst, std::abs(s - pi[j]));
    }
    return worst;
}

} // namespace

TEST_CASE("validate_chain classifies the reference chains") {
    auto two_cycle = validate_chain(chain({{0, 1}, {1, 0}}));
    CHECK(two_cycle.row_stochastic);
    CHECK(two_cycle.irreducible);
    CHECK(two_cycle.period == 2);
    CHECK_FALSE(two_cycle.aperiodic);

    auto lazy = validate_chain(chain({{0.9, 0.1}, {0.2, 0.8}}));
    CHECK(lazy.irreducible);
    CHECK(lazy.aperiodic);
    CHECK(lazy.period == 1);

    auto absorbing = validate_chain(chain({{1, 0}, {0.5, 0.5}}));
    CHECK_FALSE(absorbing.irreducible);
    CHECK_FALSE(absorbing.aperiodic);
}

TEST_CASE("period is the gcd of cycle lengths") {
    // pure 3-cycle
    CHECK(validate_chain(chain({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})).period == 3);
    // cycles of length 2 and 3 through state 0
    auto mixed = validate_chain(chain({{0, 0.5, 0.5, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}}));
    CHECK(mixed.irreducible);
    CHECK(mixed.period == 1);
    CHECK(mixed.aperiodic);
    // cycles of length 2 and 4
    auto even = validate_chain(
        chain({{0, 0.5, 0.5, 0, 0}, {1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}, {1, 0, 0, 0, 0}}));
    CHECK(even.irreducible);
    CHECK(even.period == 2);
    auto split = validate_chain(chain({{0, 0.5, 0.5, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}));
    CHECK_FALSE(split.irreducible);
    auto four = validate_chain(chain({{0, 0.5, 0.5, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}}));
    CHECK_FALSE(four.row_stochastic);
}

TEST_CASE("validate_chain edge threshold and errors") {
    const auto near_zero = chain({{0.5, 0.5}, {1.0 - 1e-12, 1e-12}});
    CHECK(validate_chain(near_zero, 0.0).aperiodic);
    CHECK(validate_chain(near_zero, 1e-9).irreducible);

    CHECK_THROWS_AS(validate_chain(chain({{std::nan(""), 1}, {1, 0}})), ModelError);
    CHECK_THROWS_AS(validate_chain(chain({{1.5, -0.5}, {0.5, 0.5}})), ModelError);
    CHECK_NOTHROW(validate_chain(chain({{1.0 + 1e-13, -1e-13}, {0.5, 0.5}}), 1e-12));
    CHECK_THROWS_AS(MarkovChain(Matrix(2, 3)), ModelError);
}

TEST_CASE("stationary distribution") {
    SUBCASE("hand-solved 2x2") {
        auto pi = stationary_distribution(chain({{0.9, 0.1}, {0.2, 0.8}}));
        CHECK(pi[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("uniform rows give the uniform law") {
        Matrix m(5, 5, 0.2);
        auto pi = stationary_distribution(MarkovChain(m));
        for (double v : pi) CHECK(std::abs(v - 0.2) <= 1e-12);
    }
    SUBCASE("doubly stochastic flip chain") {
        auto pi = stationary_distribution(chain({{0.9, 0.1}, {0.1, 0.9}}));
        CHECK(std::abs(pi[0] - 0.5) <= 1e-12);
        CHECK(std::abs(pi[1] - 0.5) <= 1e-12);
    }
    SUBCASE("periodic and reducible chains are rejected") {
        CHECK_THROWS_AS(stationary_distribution(chain({{0, 1}, {1, 0}})), ModelError);
        CHECK_THROWS_AS(stationary_distribution(chain({{1, 0}, {0.5, 0.5}})), ModelError);
    }
}

TEST_CASE("stationary distribution property: fixed point, normalized, positive, matches power iteration") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto c = random_dense_chain(rng, 2 + trial % 12);
        const auto pi = stationary_distribution(c);
        double sum = 0.0;
        for (double v : pi) {
            CHECK(v > 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        CHECK(residual(c, pi) <= 1e-12);
        const auto reference = oracle::power_stationary(c.transitions());
        for (std::size_t i = 0; i < pi.size(); ++i) CHECK(std::abs(pi[i] - reference[i]) <= 1e-10);
    }
}

TEST_CASE("l_step_matrix") {
    const auto flip = chain({{0.9, 0.1}, {0.1, 0.9}});
    const Matrix one = l_step_matrix(flip, 1);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(one(i, j) == flip.transitions()(i, j));

    for (std::uint64_t L = 1; L <= 128; ++L) {
        const Matrix ml = l_step_matrix(flip, L);
        CHECK(std::abs(ml(0, 0) - (1.0 + std::pow(0.8, static_cast<double>(L))) / 2.0) <= 1e-12);
        CHECK(std::abs(ml(0, 0) + ml(0, 1) - 1.0) <= 1e-9);
    }

    const auto iid = chain({{0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}});
    for (std::uint64_t L : {1, 2, 7, 100}) {
        const Matrix ml = l_step_matrix(iid, L);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(ml(i, j) - iid.transitions()(i, j)) <= 1e-15);
    }
    CHECK_THROWS_AS(l_step_matrix(flip, 0), ModelError);
}

TEST_CASE("l_step_matrix semigroup property") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = random_dense_chain(rng, 2 + trial % 6);
        const std::uint64_t a = 1 + rng.next() % 20, b = 1 + rng.next() % 20;
        const Matrix lhs = l_step_matrix(c, a + b);
        const Matrix rhs = l_step_matrix(c, a) * l_step_matrix(c, b);
        for (std::size_t i = 0; i < c.states(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < c.states(); ++j) {
                CHECK(std::abs(lhs(i, j) - rhs(i, j)) <= 1e-9);
                row += lhs(i, j);
            }
            CHECK(std::abs(row - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("mixing_deficit") {
    const auto iid = chain({{0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}});
    for (std::uint64_t L : {1, 2, 5, 40}) CHECK(mixing_deficit(iid, L) <= 1e-15);

    const auto flip = chain({{0.9, 0.1}, {0.1, 0.9}});
    for (std::uint64_t L = 1; L <= 64; ++L)
        CHECK(std::abs(mixing_deficit(flip, L) - std::pow(0.8, static_cast<double>(L))) <= 1e-12);
    CHECK(mixing_deficit(flip, 64) == doctest::Approx(6.277101735386703e-07).epsilon(1e-6));

    const Matrix rho = joint_l_step(chain({{0.9, 0.1}, {0.2, 0.8}}), 3);
    const Matrix m3 = l_step_matrix(chain({{0.9, 0.1}, {0.2, 0.8}}), 3);
    CHECK(rho(1, 0) == doctest::Approx(m3(1, 0) / 3.0).epsilon(1e-12));
}

TEST_CASE("HiddenMarkovModel validation") {
    using models::make;
    CHECK_THROWS_AS(make({{0.5, 0.4}, {0.5, 0.5}}, {"a", "b"}, {{1, 0}, {0, 1}}), ModelError);
    CHECK_THROWS_AS(make({{0.5, 0.5}, {0.5, 0.5}}, {"a", "a"}, {{1, 0}, {0, 1}}), ModelError);
    CHECK_THROWS_AS(make({{0.5, 0.5}, {0.5, 0.5}}, {"a", "b"}, {{1, 0}, {0.2, 0.7}}), ModelError);
    CHECK_THROWS_AS(make({{1.0}}, {}, {{}}), ModelError);
    // periodic chain without an explicit initial law
    CHECK_THROWS_AS(make({{0, 1}, {1, 0}}, {"a", "b"}, {{1, 0}, {0, 1}}), ModelError);
    HiddenMarkovModel periodic(MarkovChain(Matrix::from_rows({{0, 1}, {1, 0}})), Alphabet({"a", "b"}),
                               Matrix::from_rows({{1, 0}, {0, 1}}), {1.0, 0.0});
    CHECK_FALSE(periodic.ergodic());
    CHECK_THROWS_AS(periodic.stationary(), ModelError);

    CHECK(models::flip_chain(0.1).state_revealing());
    CHECK_FALSE(models::hidden_binary().state_revealing());
    CHECK_FALSE(models::iid_uniform_binary().state_revealing());
}

TEST_CASE("sample_path") {
    const auto flip = models::flip_chain(0.1);
    SUBCASE("empty path") {
        const auto p = sample_path(flip, 0, 1);
        CHECK(p.states.empty());
        CHECK(p.symbols.empty());
    }
    SUBCASE("deterministic source") {
        const auto det = models::make({{1.0}}, {"a", "b"}, {{1.0, 0.0}});
        const auto p = sample_path(det, 5, 99);
        CHECK(format_symbol_text(p.symbols, det.alphabet()) == "aaaaa");
    }
    SUBCASE("pure function of its inputs") {
        const auto a = sample_path(models::hidden_binary(), 5000, 42);
        const auto b = sample_path(models::hidden_binary(), 5000, 42);
        const auto c = sample_path(models::hidden_binary(), 5000, 43);
        CHECK(a.states == b.states);
        CHECK(a.symbols == b.symbols);
        CHECK(a.final_state == b.final_state);
        CHECK(a.symbols != c.symbols);
        // a shorter path is a prefix of a longer one with the same seed
        const auto shorter = sample_path(models::hidden_binary(), 1000, 42);
        CHECK(std::equal(shorter.symbols.begin(), shorter.symbols.end(), a.symbols.begin()));
    }
    SUBCASE("visible chain emits its state") {
        const auto p = sample_path(flip, 2000, 5);
        for (std::size_t t = 0; t < p.symbols.size(); ++t) CHECK(p.symbols[t] == p.states[t]);
    }
    SUBCASE("occupation of the flip chain matches the stationary law") {
        const auto p = sample_path(flip, 1000000, 20240601);
        double zeros = 0;
        for (auto z : p.states) zeros += (z == 0);
        CHECK(std::abs(zeros / 1e6 - 0.5) <= 0.01);
    }
    SUBCASE("explicit initial law") {
        HiddenMarkovModel pinned(MarkovChain(Matrix::from_rows({{0.9, 0.1}, {0.1, 0.9}})), Alphabet({"0", "1"}),
                                 Matrix::from_rows({{1, 0}, {0, 1}}), {0.0, 1.0});
        for (std::uint64_t seed = 0; seed < 50; ++seed)
            CHECK(sample_path(pinned, 1, seed, InitialLaw::explicit_pi0).states[0] == 1);
    }
}

TEST_CASE("categorical sampling never picks zero-width cells") {
    const std::vector<double> cdf = {0.0, 0.5, 0.5, 1.0};
    CHECK(sample_categorical(cdf, 0.0) == 1);
    CHECK(sample_categorical(cdf, 0.49) == 1);
    CHECK(sample_categorical(cdf, 0.5) == 3);
    CHECK(sample_categorical(cdf, 0.9999) == 3);
    const std::vector<double> short_cdf = {0.3, 0.9999999, 0.9999999};
    CHECK(sample_categorical(short_cdf, 0.99999995) == 1);
}
