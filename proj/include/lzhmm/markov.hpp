#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lzhmm/symbols.hpp"

namespace lzhmm {

// Dense row-major square matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t k);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    friend Matrix operator*(const Matrix& a, const Matrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// k-state chain, M(i, j) = Pr[Z_{t+1} = j | Z_t = i].
// Construction only checks shape; validate_chain reports stochasticity and graph structure.
class MarkovChain {
public:
    explicit MarkovChain(Matrix transitions);

    std::size_t states() const noexcept { return m_.rows(); }
    const Matrix& transitions() const noexcept { return m_; }

private:
    Matrix m_;
};

struct ValidationReport {
    bool row_stochastic = false;
    bool irreducible = false;
    bool aperiodic = false;
    // gcd of cycle lengths; meaningful only when irreducible (0 otherwise).
    std::uint64_t period = 0;
};

// Edges are {(i, j) : M(i, j) > tol}. Throws ModelError on non-finite entries or entries below -tol.
ValidationReport validate_chain(const MarkovChain& chain, double tol = 0.0);

// Solves Π(M - I) = 0, ΣΠ = 1 directly. Throws ModelError unless the chain is irreducible and aperiodic.
std::vector<double> stationary_distribution(const MarkovChain& chain);

// M^L by repeated squaring. Entry (a, b) is Pr[Z_L = b | Z_0 = a].
Matrix l_step_matrix(const MarkovChain& chain, std::uint64_t L);

// max_a Σ_b |Pr[Z_L = b | Z_0 = a] - Π(b)|. "L is ε-mixing" iff this is <= ε.
double mixing_deficit(const MarkovChain& chain, std::uint64_t L);

// ρ_{ab,L} = Π(a) · Pr[Z_L = b | Z_0 = a].
Matrix joint_l_step(const MarkovChain& chain, std::uint64_t L);

class HiddenMarkovModel {
public:
    // Validates probability vectors and the alphabet; throws ModelError with the offending field.
    // An empty `initial` selects the stationary distribution.
    HiddenMarkovModel(MarkovChain chain, Alphabet alphabet, Matrix emissions, std::vector<double> initial = {});

    const MarkovChain& chain() const noexcept { return chain_; }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t states() const noexcept { return chain_.states(); }
    // emissions()(z, x) = P^{(z)}(x)
    const Matrix& emissions() const noexcept { return emissions_; }
    const std::vector<double>& initial() const noexcept { return initial_; }
    bool explicit_initial() const noexcept { return explicit_initial_; }

    // Stationary Π; requires an irreducible aperiodic chain.
    const std::vector<double>& stationary() const;
    const ValidationReport& report() const noexcept { return report_; }
    bool ergodic() const noexcept { return report_.irreducible && report_.aperiodic; }

    // Every state emits a single symbol and no two states share it, so X_t determines Z_t.
    bool state_revealing() const;

private:
    MarkovChain chain_;
    Alphabet alphabet_;
    Matrix emissions_;
    std::vector<double> initial_;
    bool explicit_initial_ = false;
    ValidationReport report_;
    std::vector<double> stationary_;
};

enum class InitialLaw { explicit_pi0, stationary };

struct SamplePath {
    std::vector<std::uint32_t> states;  // Z_0 .. Z_{n-1}
    SymbolSeq symbols;                  // X_0 .. X_{n-1}
    std::uint32_t final_state = 0;      // Z_n, drawn after X_{n-1}
};

// Z_0 from the selected law, X_t ~ P^{(Z_t)}, Z_{t+1} ~ M(Z_t, ·). Pure function of its arguments.
SamplePath sample_path(const HiddenMarkovModel& hmm, std::size_t n, std::uint64_t seed,
                       InitialLaw init = InitialLaw::stationary);

} // namespace lzhmm
