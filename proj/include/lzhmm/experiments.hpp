#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <vector>

#include "lzhmm/markov.hpp"

namespace lzhmm {

struct RateRow {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t lz_bits = 0;
    std::uint64_t ih_bits = 0;
    std::uint64_t lz_phrases = 0;
    double lz_bps = 0.0;
    double ih_bps = 0.0;
    double rate_estimate = 0.0;
    double eps_threshold = 0.0;  // rate_estimate (1 + eps)
};

// For every (n, seed), in that order: sample a stationary path, compress it with LZ and with the
// Shannon block code for L. Every n must be a multiple of L.
std::vector<RateRow> rate_experiment(const HiddenMarkovModel& model, const std::vector<std::uint64_t>& lengths,
                                     const std::vector<std::uint64_t>& seeds, std::size_t L, double eps);

void write_rate_csv(std::ostream& out, const std::vector<RateRow>& rows);

struct EpochOptions {
    std::size_t exact_max_length = 4;   // track every positive block when L is at most this
    std::size_t top_blocks = 16;        // otherwise, the most probable blocks
    std::size_t expansion_cap = 1u << 20;
};

// Epoch counts for one sampled path of m = n / L epochs.
struct EpochStats {
    std::size_t L = 0;
    std::uint64_t m = 0;
    std::size_t states = 0;
    std::vector<std::uint64_t> n_a;    // [a]
    std::vector<std::uint64_t> n_ab;   // [a * k + b]
    std::vector<SymbolSeq> tracked;    // tracked blocks γ
    bool all_blocks_tracked = false;
    std::vector<std::uint64_t> k_abg;  // [(a * k + b) * tracked + g]

    std::vector<double> expected_n_a;   // Π(a) m
    std::vector<double> expected_n_ab;  // ρ_{ab,L} m
    std::vector<double> expected_k_abg; // ρ_{ab,L} P_{ab,L}(γ) m

    double max_n_a_deviation() const;   // max_a |n_a/m - Π(a)|
    double max_n_ab_deviation() const;  // max_ab |n_ab/m - ρ_{ab,L}|
    // Count of (a, b, γ) cells with |K - E| > 4 sqrt(m p(1-p)) + 1, p = E/m.
    std::size_t k_cells_outside_band() const;
    // Σ_a n_a = m, Σ_b n_ab = n_a, and Σ_γ K_ab(γ) = n_ab when every block is tracked.
    bool consistent() const;
};

// Blocks to track for a model and L, per the options.
std::vector<SymbolSeq> tracked_blocks(const HiddenMarkovModel& model, std::size_t L, const EpochOptions& options = {});

// Pr[X_0..X_{L-1} = γ, Z_L = b | Z_0 = a] for all a, b, as a k x k matrix.
Matrix conditional_block_probability(const HiddenMarkovModel& model, std::span<const Symbol> block);

EpochStats epoch_stats(const HiddenMarkovModel& model, std::size_t L, const SamplePath& path,
                       const std::vector<SymbolSeq>& tracked);

std::vector<EpochStats> epoch_experiment(const HiddenMarkovModel& model, std::size_t L, std::uint64_t n,
                                         const std::vector<std::uint64_t>& seeds, const EpochOptions& options = {});

void write_epoch_csv(std::ostream& out, const HiddenMarkovModel& model, const std::vector<std::uint64_t>& seeds,
                     const std::vector<EpochStats>& stats);

} // namespace lzhmm
