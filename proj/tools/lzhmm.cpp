#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lzhmm/complexity.hpp"
#include "lzhmm/container.hpp"
#include "lzhmm/entropy.hpp"
#include "lzhmm/error.hpp"
#include "lzhmm/experiments.hpp"
#include "lzhmm/lz.hpp"
#include "lzhmm/markov.hpp"
#include "lzhmm/model_file.hpp"

using namespace lzhmm;

namespace {

void print_vector(const char* label, const std::vector<double>& v) {
    std::printf("%s", label);
    for (double x : v) std::printf(" %.10g", x);
    std::printf("\n");
}

void print_matrix(const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) std::printf("%s%.10g", j ? " " : "  ", m(i, j));
        std::printf("\n");
    }
}

// "-" means stdout.
template <class F>
void with_output(const std::string& path, F&& write) {
    if (path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    write(out);
}

int cmd_validate(const std::string& path) {
    const auto hmm = load_model_file(path);
    const auto& r = hmm.report();
    std::printf("states: %zu\nalphabet size: %zu\n", hmm.states(), hmm.alphabet().size());
    std::printf("row stochastic: %s\nirreducible: %s\naperiodic: %s\nperiod: %llu\n", r.row_stochastic ? "yes" : "no",
                r.irreducible ? "yes" : "no", r.aperiodic ? "yes" : "no", static_cast<unsigned long long>(r.period));
    std::printf("state revealing: %s\n", hmm.state_revealing() ? "yes" : "no");
    print_vector("stationary:", hmm.stationary());
    const auto rate = reference_rate(hmm, 12);
    std::printf("entropy rate: %.10f (%s)\n", rate.bits_per_symbol, rate.exact ? "exact" : "upper estimate d_12");
    return 0;
}

int cmd_sample(const std::string& path, std::size_t n, std::uint64_t seed, bool with_states, const std::string& out_path) {
    const auto hmm = load_model_file(path);
    const auto law = hmm.explicit_initial() ? InitialLaw::explicit_pi0 : InitialLaw::stationary;
    const auto p = sample_path(hmm, n, seed, law);
    with_output(out_path, [&](std::ostream& out) {
        if (!with_states) {
            out << format_symbol_text(p.symbols, hmm.alphabet());
            return;
        }
        out << "t,state,symbol\n";
        for (std::size_t t = 0; t < n; ++t) out << t << ',' << p.states[t] << ',' << hmm.alphabet()[p.symbols[t]] << '\n';
        out << n << ',' << p.final_state << ",\n";
    });
    return 0;
}

int cmd_compress(const std::string& codec, const std::string& model_path, std::size_t L, const std::string& in,
                 const std::string& out) {
    std::optional<HiddenMarkovModel> model;
    if (!model_path.empty()) model = load_model_file(model_path);
    compress_file(in, out, codec == "ih" ? Codec::ih : Codec::lz, model ? &*model : nullptr, L);
    return 0;
}

int cmd_decompress(const std::string& in, const std::string& out, const std::string& model_path) {
    std::optional<HiddenMarkovModel> model;
    if (!model_path.empty()) model = load_model_file(model_path);
    decompress_file(in, out, model ? &*model : nullptr);
    return 0;
}

int cmd_rate(const std::string& path, const std::vector<std::uint64_t>& lengths, const std::vector<std::uint64_t>& seeds,
             std::size_t L, double eps, const std::string& csv) {
    const auto hmm = load_model_file(path);
    const auto rows = rate_experiment(hmm, lengths, seeds, L, eps);
    with_output(csv, [&](std::ostream& out) { write_rate_csv(out, rows); });
    return 0;
}

int cmd_epoch(const std::string& path, std::size_t L, std::uint64_t n, const std::vector<std::uint64_t>& seeds,
              const std::string& csv) {
    const auto hmm = load_model_file(path);
    const auto stats = epoch_experiment(hmm, L, n, seeds);
    with_output(csv, [&](std::ostream& out) { write_epoch_csv(out, hmm, seeds, stats); });
    if (csv != "-") {
        for (std::size_t i = 0; i < stats.size(); ++i)
            std::printf("seed %llu: m=%llu max|n_a/m-Pi|=%.6f max|n_ab/m-rho|=%.6f K cells outside band=%zu\n",
                        static_cast<unsigned long long>(seeds[i]), static_cast<unsigned long long>(stats[i].m),
                        stats[i].max_n_a_deviation(), stats[i].max_n_ab_deviation(), stats[i].k_cells_outside_band());
    }
    return 0;
}

int cmd_mixing(const std::string& path, std::uint64_t L) {
    const auto hmm = load_model_file(path);
    std::printf("L: %llu\nmixing deficit: %.10g\n", static_cast<unsigned long long>(L), mixing_deficit(hmm.chain(), L));
    std::printf("L-step matrix:\n");
    print_matrix(l_step_matrix(hmm.chain(), L));
    std::printf("joint rho_ab:\n");
    print_matrix(joint_l_step(hmm.chain(), L));
    return 0;
}

int cmd_compressive(const std::string& path, std::size_t L, double eps, std::size_t rate_length) {
    const auto hmm = load_model_file(path);
    const auto rate = reference_rate(hmm, rate_length);
    const auto c = is_compressive(hmm, L, eps, rate.bits_per_symbol);
    std::printf("rate: %.10f (%s)\n", rate.bits_per_symbol, rate.exact ? "exact" : "upper estimate d_L");
    std::printf("H_L: %.10f\nH_L + 1: %.10f\nrate (1 + eps) L: %.10f\n", c.block_entropy, c.lhs, c.rhs);
    std::printf("compressive: %s\nno compressive L below: %.4f\n", c.compressive ? "yes" : "no", c.min_block_length);
    return c.compressive ? 0 : 2;
}

int cmd_complexity(const std::string& s) {
    const Alphabet alphabet = byte_alphabet_of(s);
    const SymbolSeq x = parse_symbol_text(s, alphabet);
    const auto parse = lz_parse(x, alphabet.size());
    std::printf("n: %zu\nlz phrases: %zu\nsqrt lower bound: %zu\n", x.size(), parse.size(), sqrt_parse(x).size());
    if (x.size() > kDefaultComplexityCap) {
        std::printf("C(X): exact search capped at n = %zu\n", kDefaultComplexityCap);
        return 0;
    }
    const auto c = max_distinct_parse(x, alphabet.size());
    std::printf("C(X): %zu\nwitness:", c.t);
    for (const auto& piece : c.witness.pieces) std::printf(" \"%s\"", format_symbol_text(piece, alphabet).c_str());
    std::printf("\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LZ78 and iterated block coding for hidden Markov sources"};
    app.require_subcommand(1);
    int status = 0;

    std::string model, in, out, codec = "lz", csv;
    std::size_t L = 0, n = 0, rate_length = 12;
    std::uint64_t seed = 0;
    double eps = 0.25;
    bool with_states = false;
    std::vector<std::uint64_t> lengths, seeds;
    std::string text;

    auto* validate = app.add_subcommand("validate", "Check a model file and print its chain properties");
    validate->add_option("model", model)->required();
    validate->callback([&] { status = cmd_validate(model); });

    auto* sample = app.add_subcommand("sample", "Draw a stationary sample path");
    sample->add_option("model", model)->required();
    sample->add_option("-n", n, "Number of symbols")->required();
    sample->add_option("--seed", seed, "Random seed");
    sample->add_flag("--with-states", with_states, "Write t,state,symbol CSV including Z_n");
    sample->add_option("-o,--output", out, "Output file ('-' for stdout)")->default_val("-");
    sample->callback([&] { status = cmd_sample(model, n, seed, with_states, out); });

    auto* compress = app.add_subcommand("compress", "Compress a symbol file into a container");
    compress->add_option("--codec", codec)->check(CLI::IsMember({"lz", "ih"}))->default_val("lz");
    compress->add_option("--model", model, "Model file (required for ih)");
    compress->add_option("-L", L, "Block length (ih)");
    compress->add_option("in", in)->required();
    compress->add_option("out", out)->required();
    compress->callback([&] { status = cmd_compress(codec, model, L, in, out); });

    auto* decompress = app.add_subcommand("decompress", "Restore a symbol file from a container");
    decompress->add_option("in", in)->required();
    decompress->add_option("out", out)->required();
    decompress->add_option("--model", model, "Model file (required for ih)");
    decompress->callback([&] { status = cmd_decompress(in, out, model); });

    auto* rate = app.add_subcommand("rate-experiment", "LZ and block-code bits per symbol on sampled paths");
    rate->add_option("model", model)->required();
    rate->add_option("--lengths", lengths)->required();
    rate->add_option("--seeds", seeds)->required();
    rate->add_option("-L", L)->required();
    rate->add_option("--eps", eps)->default_val(0.25);
    rate->add_option("--csv", csv, "Output CSV ('-' for stdout)")->default_val("-");
    rate->callback([&] { status = cmd_rate(model, lengths, seeds, L, eps, csv); });

    auto* epoch = app.add_subcommand("epoch-stats", "Epoch counts against their expectations");
    epoch->add_option("model", model)->required();
    epoch->add_option("-L", L)->required();
    epoch->add_option("-n", n)->required();
    epoch->add_option("--seeds", seeds)->required();
    epoch->add_option("--csv", csv, "Output CSV ('-' for stdout)")->default_val("-");
    epoch->callback([&] { status = cmd_epoch(model, L, n, seeds, csv); });

    auto* mixing = app.add_subcommand("mixing", "L-step mixing deficit");
    mixing->add_option("model", model)->required();
    mixing->add_option("-L", L)->required();
    mixing->callback([&] { status = cmd_mixing(model, L); });

    auto* compressive = app.add_subcommand("compressive", "Check H_L + 1 <= rate (1 + eps) L");
    compressive->add_option("model", model)->required();
    compressive->add_option("-L", L)->required();
    compressive->add_option("--eps", eps)->required();
    compressive->add_option("--rate-length", rate_length, "Block length for d_L when the rate has no closed form")
        ->default_val(12);
    compressive->callback([&] { status = cmd_compressive(model, L, eps, rate_length); });

    auto* complexity = app.add_subcommand("complexity", "Distinct-parse complexity of a string");
    complexity->add_option("string", text)->required();
    complexity->callback([&] { status = cmd_complexity(text); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ContainerError& e) {
        std::fprintf(stderr, "container error: %s\n", e.what());
        return 1;
    } catch (const DecodeError& e) {
        std::fprintf(stderr, "decode error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return status;
}
