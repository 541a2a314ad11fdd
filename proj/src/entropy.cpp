#include "lzhmm/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "lzhmm/error.hpp"

namespace lzhmm {

namespace {

// Depth-first walk of the prefix tree of Σ^{<=depth}, in lexicographic order.
// visit(d, prefix_index, p) is called for every node at depth d >= 1 with probability p > 0.
// Subtrees of zero-probability nodes are skipped.
template <typename Visit>
void walk_prefix_tree(const HiddenMarkovModel& hmm, std::size_t depth, Visit&& visit) {
    const std::size_t k = hmm.states();
    const std::size_t sigma = hmm.alphabet().size();
    const Matrix& m = hmm.chain().transitions();
    const Matrix& e = hmm.emissions();
    const std::vector<double>& pi = hmm.stationary();

    // alpha[d] holds α for the current node at depth d + 1.
    std::vector<std::vector<double>> alpha(depth, std::vector<double>(k));
    std::vector<double> predicted(k);

    std::function<void(std::size_t, std::uint64_t)> descend = [&](std::size_t d, std::uint64_t prefix) {
        // d = number of symbols already fixed.
        if (d > 0) {
            // Pr[Z_d = z', prefix] before emitting γ_d
            const std::vector<double>& prev = alpha[d - 1];
            std::fill(predicted.begin(), predicted.end(), 0.0);
            for (std::size_t z = 0; z < k; ++z) {
                if (prev[z] == 0.0) continue;
                for (std::size_t zn = 0; zn < k; ++zn) predicted[zn] += prev[z] * m(z, zn);
            }
        }
        const std::vector<double> base = d == 0 ? pi : predicted;
        for (std::size_t x = 0; x < sigma; ++x) {
            std::vector<double>& cur = alpha[d];
            double p = 0.0;
            for (std::size_t z = 0; z < k; ++z) {
                cur[z] = base[z] * e(z, x);
                p += cur[z];
            }
            if (p <= 0.0) continue;
            const std::uint64_t index = prefix * sigma + x;
            visit(d + 1, index, p);
            if (d + 1 < depth) descend(d + 1, index);
        }
    };
    if (depth > 0) descend(0, 0);
}

double plogp_inv(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

} // namespace

std::uint64_t block_index(std::span<const Symbol> block, std::size_t alphabet_size) {
    std::uint64_t index = 0;
    for (Symbol s : block) index = index * alphabet_size + s;
    return index;
}

SymbolSeq block_symbols(std::uint64_t index, std::size_t L, std::size_t alphabet_size) {
    SymbolSeq out(L);
    for (std::size_t i = L; i-- > 0;) {
        out[i] = static_cast<Symbol>(index % alphabet_size);
        index /= alphabet_size;
    }
    return out;
}

std::uint64_t checked_block_count(std::size_t alphabet_size, std::size_t L, std::uint64_t cap) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < L; ++i) {
        if (count > cap / alphabet_size)
            throw CapacityError("|Sigma|^L = " + std::to_string(alphabet_size) + "^" + std::to_string(L) +
                                " exceeds the block cap of " + std::to_string(cap));
        count *= alphabet_size;
    }
    if (count > cap) throw CapacityError("|Sigma|^L exceeds the block cap of " + std::to_string(cap));
    return count;
}

std::optional<double> BlockDistribution::probability(std::uint64_t block) const {
    auto it = std::lower_bound(probs.begin(), probs.end(), block,
                               [](const auto& entry, std::uint64_t b) { return entry.first < b; });
    if (it == probs.end() || it->first != block) return std::nullopt;
    return it->second;
}

double BlockDistribution::total() const {
    double sum = 0.0;
    for (const auto& [block, p] : probs) sum += p;
    return sum;
}

BlockDistribution block_distribution(const HiddenMarkovModel& hmm, std::size_t L, std::uint64_t cap) {
    if (L == 0) throw ModelError("block length must be positive");
    checked_block_count(hmm.alphabet().size(), L, cap);
    BlockDistribution dist;
    dist.L = L;
    dist.alphabet_size = hmm.alphabet().size();
    walk_prefix_tree(hmm, L, [&](std::size_t d, std::uint64_t index, double p) {
        if (d == L) dist.probs.emplace_back(index, p);
    });
    return dist;
}

double block_entropy(const BlockDistribution& dist) {
    double h = 0.0;
    for (const auto& [block, p] : dist.probs) h += plogp_inv(p);
    return h;
}

RateEstimates entropy_rate_estimates(const HiddenMarkovModel& hmm, std::size_t L_max, std::uint64_t cap) {
    if (L_max == 0) throw ModelError("L_max must be positive");
    checked_block_count(hmm.alphabet().size(), L_max, cap);
    RateEstimates est;
    est.block_entropy.assign(L_max, 0.0);
    walk_prefix_tree(hmm, L_max, [&](std::size_t d, std::uint64_t, double p) { est.block_entropy[d - 1] += plogp_inv(p); });
    est.per_symbol.resize(L_max);
    est.increment.resize(L_max);
    for (std::size_t i = 0; i < L_max; ++i) {
        est.per_symbol[i] = est.block_entropy[i] / static_cast<double>(i + 1);
        est.increment[i] = i == 0 ? est.block_entropy[0] : est.block_entropy[i] - est.block_entropy[i - 1];
    }
    return est;
}

double markov_entropy_rate(const MarkovChain& chain) {
    const std::vector<double> pi = stationary_distribution(chain);
    const Matrix& m = chain.transitions();
    double rate = 0.0;
    for (std::size_t a = 0; a < chain.states(); ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < chain.states(); ++b) row += plogp_inv(m(a, b));
        rate += pi[a] * row;
    }
    return rate;
}

RateEstimate reference_rate(const HiddenMarkovModel& hmm, std::size_t L_max, std::uint64_t cap) {
    if (hmm.state_revealing()) return {markov_entropy_rate(hmm.chain()), true};
    // Largest L <= L_max that fits the cap.
    std::size_t L = std::max<std::size_t>(1, L_max);
    while (L > 1) {
        try {
            checked_block_count(hmm.alphabet().size(), L, cap);
            break;
        } catch (const CapacityError&) {
            --L;
        }
    }
    const RateEstimates est = entropy_rate_estimates(hmm, L, cap);
    return {est.increment.back(), false};
}

CompressiveCheck is_compressive(const HiddenMarkovModel& hmm, std::size_t L, double eps, double rate,
                                std::uint64_t cap) {
    if (!(eps > 0.0)) throw ModelError("eps must be positive");
    if (!(rate > 0.0)) throw ModelError("rate must be positive");
    CompressiveCheck check;
    check.block_entropy = block_entropy(block_distribution(hmm, L, cap));
    check.lhs = check.block_entropy + 1.0;
    check.rhs = rate * (1.0 + eps) * static_cast<double>(L);
    check.compressive = check.lhs <= check.rhs + 1e-9;
    check.min_block_length = 1.0 / (eps * rate);
    return check;
}

} // namespace lzhmm
