#include "lzhmm/fst.hpp"

#include <cmath>
#include <map>

#include "lzhmm/error.hpp"

namespace lzhmm {

Transducer::Transducer(std::size_t states, StateId initial, std::size_t input_alphabet, std::size_t output_alphabet,
                       std::vector<Transition> delta, std::optional<StateId> error_sink)
    : states_(states), initial_(initial), sigma_(input_alphabet), gamma_(output_alphabet), delta_(std::move(delta)),
      sink_(error_sink) {
    if (states_ == 0) throw Error("transducer needs at least one state");
    if (initial_ >= states_) throw Error("initial state out of range");
    if (sigma_ == 0) throw Error("input alphabet must not be empty");
    if (delta_.size() != states_ * sigma_) throw Error("transition function must be total over Q x Σ");
    if (sink_ && *sink_ >= states_) throw Error("error sink out of range");
    for (const Transition& tr : delta_) {
        if (tr.next >= states_) throw Error("transition targets a state out of range");
        for (Symbol y : tr.output)
            if (y >= gamma_) throw Error("transition output outside Γ");
    }
}

TransducerRun run_transducer(const Transducer& t, std::span<const Symbol> x) {
    check_symbols(x, t.input_alphabet_size());
    TransducerRun run;
    StateId q = t.initial();
    for (Symbol s : x) {
        const Transition& tr = t.delta(q, s);
        run.output.insert(run.output.end(), tr.output.begin(), tr.output.end());
        q = tr.next;
        if (t.error_sink() && q == *t.error_sink()) run.failed = true;
    }
    run.final_state = q;
    return run;
}

BitString output_bits(const OutputWord& word) {
    BitString out;
    for (Symbol y : word) {
        if (y > 1) throw Error("output word is not binary");
        out.push_back(y == 1);
    }
    return out;
}

Transducer compile_ih(const BlockCode& code) {
    const std::size_t L = code.block_length();
    const std::size_t sigma = code.alphabet().size();

    // Number the reachable proper prefixes (depth < L) in order of (depth, prefix index).
    std::vector<std::map<std::uint64_t, StateId>> states_at(L);
    states_at[0][0] = 0;
    StateId count = 1;
    for (std::size_t depth = 1; depth < L; ++depth) {
        std::uint64_t divisor = 1;
        for (std::size_t i = depth; i < L; ++i) divisor *= sigma;
        for (const CodeEntry& e : code.entries()) {
            auto [it, inserted] = states_at[depth].emplace(e.block / divisor, count);
            if (inserted) ++count;
        }
    }

    bool needs_sink = false;
    std::vector<Transition> delta(static_cast<std::size_t>(count) * sigma);
    std::vector<std::pair<std::size_t, Symbol>> to_sink;  // transitions patched once the sink exists
    for (std::size_t depth = 0; depth < L; ++depth) {
        for (const auto& [prefix, q] : states_at[depth]) {
            for (Symbol x = 0; x < sigma; ++x) {
                Transition& tr = delta[static_cast<std::size_t>(q) * sigma + x];
                const std::uint64_t extended = prefix * sigma + x;
                if (depth + 1 == L) {
                    if (const CodeEntry* e = code.find(extended)) {
                        tr.next = 0;
                        for (std::size_t i = 0; i < e->codeword.size(); ++i) tr.output.push_back(e->codeword[i] ? 1 : 0);
                        continue;
                    }
                } else if (auto it = states_at[depth + 1].find(extended); it != states_at[depth + 1].end()) {
                    tr.next = it->second;
                    continue;
                }
                needs_sink = true;
                to_sink.emplace_back(q, x);
            }
        }
    }

    std::optional<StateId> sink;
    if (needs_sink) {
        sink = count++;
        for (Symbol x = 0; x < sigma; ++x) delta.push_back({*sink, {}});
        for (const auto& [q, x] : to_sink) delta[q * sigma + x] = {*sink, {}};
    }
    return Transducer(count, 0, sigma, 2, std::move(delta), sink);
}

double fsc_length_lower_bound(std::uint64_t t, std::uint64_t s) {
    if (t == 0 || s == 0) throw Error("t and s must be positive");
    const double td = static_cast<double>(t);
    return td * std::log2(td) - (3.0 + 2.0 * std::log2(static_cast<double>(s))) * td;
}

Transducer identity_transducer(std::size_t alphabet_size) {
    std::vector<Transition> delta;
    for (Symbol x = 0; x < alphabet_size; ++x) delta.push_back({0, {x}});
    return Transducer(1, 0, alphabet_size, alphabet_size, std::move(delta));
}

Transducer eraser_transducer(std::size_t alphabet_size) {
    return Transducer(1, 0, alphabet_size, 2, std::vector<Transition>(alphabet_size, Transition{0, {}}));
}

Transducer differential_transducer() {
    // state = previous bit
    std::vector<Transition> delta = {
        {0, {0}}, {1, {1}},  // previous 0
        {0, {1}}, {1, {0}},  // previous 1
    };
    return Transducer(2, 0, 2, 2, std::move(delta));
}

} // namespace lzhmm
