#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lzhmm/block_code.hpp"
#include "lzhmm/symbols.hpp"

namespace lzhmm {

using StateId = std::uint32_t;
using OutputWord = std::vector<Symbol>;  // word over Γ

struct Transition {
    StateId next = 0;
    OutputWord output;
};

// Deterministic transducer (Q, q0, Σ, Γ, δ) with outputs on transitions. δ is total:
// delta(q, x) is stored for every state q and input symbol x.
class Transducer {
public:
    Transducer(std::size_t states, StateId initial, std::size_t input_alphabet, std::size_t output_alphabet,
               std::vector<Transition> delta, std::optional<StateId> error_sink = std::nullopt);

    std::size_t state_count() const noexcept { return states_; }
    StateId initial() const noexcept { return initial_; }
    std::size_t input_alphabet_size() const noexcept { return sigma_; }
    std::size_t output_alphabet_size() const noexcept { return gamma_; }
    std::optional<StateId> error_sink() const noexcept { return sink_; }

    const Transition& delta(StateId q, Symbol x) const { return delta_[static_cast<std::size_t>(q) * sigma_ + x]; }

private:
    std::size_t states_;
    StateId initial_;
    std::size_t sigma_;
    std::size_t gamma_;
    std::vector<Transition> delta_;
    std::optional<StateId> sink_;
};

struct TransducerRun {
    OutputWord output;
    StateId final_state = 0;
    // The run entered the error sink.
    bool failed = false;
};

// (q_i, Y_i) = δ(q_{i-1}, X_i); output is Y_1 ∘ ... ∘ Y_n. Throws on symbols outside Σ.
TransducerRun run_transducer(const Transducer& t, std::span<const Symbol> x);

// Output of a binary-output transducer as a BitString.
BitString output_bits(const OutputWord& word);

// States are the reachable proper prefixes of positive-probability blocks (root = λ). Reading the
// L-th symbol of a block emits its codeword and returns to the root. Unreachable prefixes and
// zero-probability blocks lead to an error sink, which is materialized only when needed.
Transducer compile_ih(const BlockCode& code);

// t log2 t - (3 + 2 log2 s) t; may be negative.
double fsc_length_lower_bound(std::uint64_t t, std::uint64_t s);

// Hand-built binary machines used as additional lower-bound subjects.
Transducer identity_transducer(std::size_t alphabet_size);
Transducer eraser_transducer(std::size_t alphabet_size);
// Two states remember the previous bit and emit x XOR previous; injective on {0,1}^n.
Transducer differential_transducer();

} // namespace lzhmm
