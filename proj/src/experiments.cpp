#include "lzhmm/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <queue>

#include "lzhmm/block_code.hpp"
#include "lzhmm/entropy.hpp"
#include "lzhmm/error.hpp"
#include "lzhmm/lz.hpp"

namespace lzhmm {

namespace {

std::string block_label(const SymbolSeq& block, const Alphabet& alphabet) {
    std::string out;
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (i > 0 && !alphabet.single_byte()) out += ' ';
        out += alphabet[block[i]];
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::vector<RateRow> rate_experiment(const HiddenMarkovModel& model, const std::vector<std::uint64_t>& lengths,
                                     const std::vector<std::uint64_t>& seeds, std::size_t L, double eps) {
    if (L == 0) throw Error("L must be positive");
    for (std::uint64_t n : lengths)
        if (n % L != 0) throw Error("length " + std::to_string(n) + " is not a multiple of L = " + std::to_string(L));
    const BlockCode code = build_shannon_code(block_distribution(model, L), model.alphabet());
    const RateEstimate rate = reference_rate(model, L);
    const std::size_t sigma = model.alphabet().size();

    std::vector<RateRow> rows;
    for (std::uint64_t n : lengths) {
        for (std::uint64_t seed : seeds) {
            const SamplePath path = sample_path(model, n, seed, InitialLaw::stationary);
            const LzParse parse = lz_parse(path.symbols, sigma);
            RateRow row;
            row.n = n;
            row.seed = seed;
            row.lz_phrases = parse.size();
            row.lz_bits = lz_encode(parse, sigma).size();
            row.ih_bits = ih_encode(path.symbols, code).size();
            row.lz_bps = n ? static_cast<double>(row.lz_bits) / static_cast<double>(n) : 0.0;
            row.ih_bps = n ? static_cast<double>(row.ih_bits) / static_cast<double>(n) : 0.0;
            row.rate_estimate = rate.bits_per_symbol;
            row.eps_threshold = rate.bits_per_symbol * (1.0 + eps);
            rows.push_back(row);
        }
    }
    return rows;
}

void write_rate_csv(std::ostream& out, const std::vector<RateRow>& rows) {
    out.imbue(std::locale::classic());
    out << "n,seed,lz_bits,ih_bits,lz_bps,ih_bps,rate_estimate,eps_threshold\n";
    out << std::setprecision(9);
    for (const RateRow& r : rows)
        out << r.n << ',' << r.seed << ',' << r.lz_bits << ',' << r.ih_bits << ',' << r.lz_bps << ',' << r.ih_bps << ','
            << r.rate_estimate << ',' << r.eps_threshold << '\n';
}

double EpochStats::max_n_a_deviation() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < states; ++a)
        worst = std::max(worst, std::abs(static_cast<double>(n_a[a]) - expected_n_a[a]) / static_cast<double>(m));
    return worst;
}

double EpochStats::max_n_ab_deviation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < states * states; ++i)
        worst = std::max(worst, std::abs(static_cast<double>(n_ab[i]) - expected_n_ab[i]) / static_cast<double>(m));
    return worst;
}

std::size_t EpochStats::k_cells_outside_band() const {
    std::size_t outside = 0;
    const double md = static_cast<double>(m);
    for (std::size_t i = 0; i < k_abg.size(); ++i) {
        const double expected = expected_k_abg[i];
        const double p = expected / md;
        const double band = 4.0 * std::sqrt(md * p * (1.0 - p)) + 1.0;
        if (std::abs(static_cast<double>(k_abg[i]) - expected) > band) ++outside;
    }
    return outside;
}

bool EpochStats::consistent() const {
    std::uint64_t total = 0;
    for (std::size_t a = 0; a < states; ++a) {
        total += n_a[a];
        std::uint64_t row = 0;
        for (std::size_t b = 0; b < states; ++b) {
            const std::uint64_t nab = n_ab[a * states + b];
            row += nab;
            if (all_blocks_tracked) {
                std::uint64_t cells = 0;
                for (std::size_t g = 0; g < tracked.size(); ++g) cells += k_abg[(a * states + b) * tracked.size() + g];
                if (cells != nab) return false;
            }
        }
        if (row != n_a[a]) return false;
    }
    return total == m;
}

Matrix conditional_block_probability(const HiddenMarkovModel& model, std::span<const Symbol> block) {
    const std::size_t k = model.states();
    const Matrix& trans = model.chain().transitions();
    const Matrix& e = model.emissions();
    check_symbols(block, model.alphabet().size());
    Matrix out(k, k);
    std::vector<double> alpha(k), next(k);
    for (std::size_t a = 0; a < k; ++a) {
        std::fill(alpha.begin(), alpha.end(), 0.0);
        alpha[a] = block.empty() ? 1.0 : e(a, block[0]);
        for (std::size_t t = 1; t < block.size(); ++t) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t z = 0; z < k; ++z)
                if (alpha[z] != 0.0)
                    for (std::size_t zn = 0; zn < k; ++zn) next[zn] += alpha[z] * trans(z, zn);
            for (std::size_t zn = 0; zn < k; ++zn) alpha[zn] = next[zn] * e(zn, block[t]);
        }
        // one more step to Z_L
        for (std::size_t z = 0; z < k; ++z)
            if (alpha[z] != 0.0)
                for (std::size_t b = 0; b < k; ++b) out(a, b) += alpha[z] * trans(z, b);
    }
    return out;
}

std::vector<SymbolSeq> tracked_blocks(const HiddenMarkovModel& model, std::size_t L, const EpochOptions& options) {
    const std::size_t sigma = model.alphabet().size();
    std::vector<SymbolSeq> out;
    if (L <= options.exact_max_length) {
        const BlockDistribution dist = block_distribution(model, L);
        for (const auto& [block, p] : dist.probs) out.push_back(block_symbols(block, L, sigma));
        return out;
    }
    // Best-first search over the prefix tree: prefix probabilities only shrink with depth, so
    // complete blocks pop in order of decreasing probability.
    struct Node {
        double p;
        SymbolSeq prefix;
        std::vector<double> alpha;  // Pr[prefix, Z_{|prefix|-1} = z]
        bool operator<(const Node& o) const { return p < o.p; }
    };
    const std::size_t k = model.states();
    const Matrix& trans = model.chain().transitions();
    const Matrix& e = model.emissions();
    const std::vector<double>& pi = model.stationary();
    std::priority_queue<Node> queue;
    queue.push({1.0, {}, {}});
    std::size_t expansions = 0;
    while (!queue.empty() && out.size() < options.top_blocks && expansions < options.expansion_cap) {
        Node node = queue.top();
        queue.pop();
        if (node.prefix.size() == L) {
            out.push_back(std::move(node.prefix));
            continue;
        }
        ++expansions;
        std::vector<double> base(k, 0.0);
        if (node.prefix.empty()) {
            base = pi;
        } else {
            for (std::size_t z = 0; z < k; ++z)
                for (std::size_t zn = 0; zn < k; ++zn) base[zn] += node.alpha[z] * trans(z, zn);
        }
        for (Symbol x = 0; x < sigma; ++x) {
            Node child;
            child.alpha.resize(k);
            child.p = 0.0;
            for (std::size_t z = 0; z < k; ++z) {
                child.alpha[z] = base[z] * e(z, x);
                child.p += child.alpha[z];
            }
            if (child.p <= 0.0) continue;
            child.prefix = node.prefix;
            child.prefix.push_back(x);
            queue.push(std::move(child));
        }
    }
    return out;
}

EpochStats epoch_stats(const HiddenMarkovModel& model, std::size_t L, const SamplePath& path,
                       const std::vector<SymbolSeq>& tracked) {
    const std::size_t n = path.symbols.size();
    if (L == 0 || n % L != 0) throw Error("path length must be a positive multiple of L");
    const std::size_t k = model.states();
    EpochStats st;
    st.L = L;
    st.m = n / L;
    st.states = k;
    st.tracked = tracked;
    st.n_a.assign(k, 0);
    st.n_ab.assign(k * k, 0);
    st.k_abg.assign(k * k * tracked.size(), 0);

    std::map<SymbolSeq, std::size_t> lookup;
    for (std::size_t g = 0; g < tracked.size(); ++g) lookup.emplace(tracked[g], g);

    for (std::uint64_t i = 0; i < st.m; ++i) {
        const std::uint32_t a = path.states[i * L];
        const std::uint32_t b = (i + 1) * L < n ? path.states[(i + 1) * L] : path.final_state;
        ++st.n_a[a];
        ++st.n_ab[a * k + b];
        SymbolSeq block(path.symbols.begin() + static_cast<std::ptrdiff_t>(i * L),
                        path.symbols.begin() + static_cast<std::ptrdiff_t>((i + 1) * L));
        if (auto it = lookup.find(block); it != lookup.end()) ++st.k_abg[(a * k + b) * tracked.size() + it->second];
    }

    const std::vector<double>& pi = model.stationary();
    const Matrix rho = joint_l_step(model.chain(), L);
    const double md = static_cast<double>(st.m);
    st.expected_n_a.resize(k);
    st.expected_n_ab.resize(k * k);
    for (std::size_t a = 0; a < k; ++a) {
        st.expected_n_a[a] = pi[a] * md;
        for (std::size_t b = 0; b < k; ++b) st.expected_n_ab[a * k + b] = rho(a, b) * md;
    }
    // ρ_{ab,L} P_{ab,L}(γ) = Π(a) Pr[γ, Z_L = b | Z_0 = a]
    st.expected_k_abg.assign(st.k_abg.size(), 0.0);
    double tracked_mass = 0.0;
    for (std::size_t g = 0; g < tracked.size(); ++g) {
        const Matrix cond = conditional_block_probability(model, tracked[g]);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                const double joint = pi[a] * cond(a, b);
                st.expected_k_abg[(a * k + b) * tracked.size() + g] = joint * md;
                tracked_mass += joint;
            }
    }
    st.all_blocks_tracked = std::abs(tracked_mass - 1.0) <= 1e-9;
    return st;
}

std::vector<EpochStats> epoch_experiment(const HiddenMarkovModel& model, std::size_t L, std::uint64_t n,
                                         const std::vector<std::uint64_t>& seeds, const EpochOptions& options) {
    if (L == 0 || n % L != 0) throw Error("n must be a positive multiple of L");
    const std::vector<SymbolSeq> tracked = tracked_blocks(model, L, options);
    std::vector<EpochStats> out;
    for (std::uint64_t seed : seeds) out.push_back(epoch_stats(model, L, sample_path(model, n, seed), tracked));
    return out;
}

void write_epoch_csv(std::ostream& out, const HiddenMarkovModel& model, const std::vector<std::uint64_t>& seeds,
                     const std::vector<EpochStats>& stats) {
    out.imbue(std::locale::classic());
    out << std::setprecision(9);
    out << "seed,quantity,a,b,block,observed,expected,abs_deviation\n";
    for (std::size_t s = 0; s < stats.size(); ++s) {
        const EpochStats& st = stats[s];
        const std::uint64_t seed = seeds.at(s);
        const double md = static_cast<double>(st.m);
        const std::size_t k = st.states;
        for (std::size_t a = 0; a < k; ++a) {
            const double obs = static_cast<double>(st.n_a[a]) / md, exp = st.expected_n_a[a] / md;
            out << seed << ",n_a/m," << a << ",,," << obs << ',' << exp << ',' << std::abs(obs - exp) << '\n';
        }
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                const double obs = static_cast<double>(st.n_ab[a * k + b]) / md, exp = st.expected_n_ab[a * k + b] / md;
                out << seed << ",n_ab/m," << a << ',' << b << ",," << obs << ',' << exp << ',' << std::abs(obs - exp) << '\n';
            }
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                for (std::size_t g = 0; g < st.tracked.size(); ++g) {
                    const std::size_t i = (a * k + b) * st.tracked.size() + g;
                    const double obs = static_cast<double>(st.k_abg[i]);
                    out << seed << ",K_ab," << a << ',' << b << ',' << csv_field(block_label(st.tracked[g], model.alphabet()))
                        << ',' << obs << ',' << st.expected_k_abg[i] << ',' << std::abs(obs - st.expected_k_abg[i]) << '\n';
                }
        out << seed << ",max_abs_n_a,,,," << st.max_n_a_deviation() << ",0," << st.max_n_a_deviation() << '\n';
        out << seed << ",max_abs_n_ab,,,," << st.max_n_ab_deviation() << ",0," << st.max_n_ab_deviation() << '\n';
    }
}

} // namespace lzhmm
