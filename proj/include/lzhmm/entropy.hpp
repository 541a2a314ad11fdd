#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lzhmm/markov.hpp"

namespace lzhmm {

inline constexpr std::uint64_t kDefaultBlockCap = std::uint64_t{1} << 24;

// Blocks γ ∈ Σ^L are identified by their base-|Σ| value with γ_0 most significant,
// so numeric order equals lexicographic order.
std::uint64_t block_index(std::span<const Symbol> block, std::size_t alphabet_size);
SymbolSeq block_symbols(std::uint64_t index, std::size_t L, std::size_t alphabet_size);

// |Σ|^L, or CapacityError when it exceeds `cap`.
std::uint64_t checked_block_count(std::size_t alphabet_size, std::size_t L, std::uint64_t cap);

// Stationary block law P_L. Zero-probability blocks are omitted.
struct BlockDistribution {
    std::size_t L = 0;
    std::size_t alphabet_size = 0;
    std::vector<std::pair<std::uint64_t, double>> probs;  // sorted by block index

    std::optional<double> probability(std::uint64_t block) const;
    double total() const;
};

// Exact forward recursion over the depth-L prefix tree, starting from Π.
BlockDistribution block_distribution(const HiddenMarkovModel& hmm, std::size_t L,
                                     std::uint64_t cap = kDefaultBlockCap);

// Σ P log2(1/P) in bits.
double block_entropy(const BlockDistribution& dist);

struct RateEstimates {
    // Index L - 1 holds the value for block length L.
    std::vector<double> block_entropy;  // H_L
    std::vector<double> per_symbol;     // v_L = H_L / L
    std::vector<double> increment;      // d_L = H_L - H_{L-1}, d_1 = H_1

    std::size_t max_length() const noexcept { return block_entropy.size(); }
};

// H_1 .. H_{L_max} from a single walk of the prefix tree.
RateEstimates entropy_rate_estimates(const HiddenMarkovModel& hmm, std::size_t L_max,
                                     std::uint64_t cap = kDefaultBlockCap);

// Σ_a Π(a) Σ_b M(a,b) log2(1/M(a,b)): the exact rate when the emissions reveal the state.
double markov_entropy_rate(const MarkovChain& chain);

// Closed form for state-revealing models, otherwise d_{L_max} (an upper estimate).
struct RateEstimate {
    double bits_per_symbol = 0.0;
    bool exact = false;
};
RateEstimate reference_rate(const HiddenMarkovModel& hmm, std::size_t L_max, std::uint64_t cap = kDefaultBlockCap);

struct CompressiveCheck {
    bool compressive = false;
    double block_entropy = 0.0;   // H_L
    double lhs = 0.0;             // H_L + 1
    double rhs = 0.0;             // rate (1 + eps) L
    double min_block_length = 0;  // 1 / (eps rate): compressive L can't be shorter
};

// H_L + 1 <= rate (1 + eps) L, compared with 1e-9 absolute slack.
CompressiveCheck is_compressive(const HiddenMarkovModel& hmm, std::size_t L, double eps, double rate,
                                std::uint64_t cap = kDefaultBlockCap);

} // namespace lzhmm
