#include "lzhmm/markov.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "lzhmm/error.hpp"
#include "lzhmm/random.hpp"

namespace lzhmm {

namespace {

constexpr double kSumTolerance = 1e-9;

void check_distribution(std::span<const double> p, const std::string& what) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i])) throw ModelError(what + "[" + std::to_string(i) + "] is not finite");
        if (p[i] < 0.0) throw ModelError(what + "[" + std::to_string(i) + "] is negative");
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw ModelError(what + " sums to " + std::to_string(sum) + ", expected 1");
}

std::vector<std::vector<std::size_t>> edge_lists(const Matrix& m, double tol, bool reverse) {
    std::vector<std::vector<std::size_t>> adj(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) > tol) {
                if (reverse)
                    adj[j].push_back(i);
                else
                    adj[i].push_back(j);
            }
    return adj;
}

// BFS levels from state 0; -1 marks unreachable states.
std::vector<long> bfs_levels(const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<long> level(adj.size(), -1);
    std::queue<std::size_t> queue;
    level[0] = 0;
    queue.push(0);
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop();
        for (std::size_t v : adj[u]) {
            if (level[v] < 0) {
                level[v] = level[u] + 1;
                queue.push(v);
            }
        }
    }
    return level;
}

// Gaussian elimination with partial pivoting; a is n x n row-major, b length n.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (a[pivot * n + col] == 0.0) throw ModelError("singular system in stationary solve");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
        x[i] = s / a[i * n + i];
    }
    return x;
}

} // namespace

Matrix Matrix::identity(std::size_t k) {
    Matrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows[0].size() : 0;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw ModelError("row " + std::to_string(i) + " has the wrong length");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ModelError("matrix shape mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

MarkovChain::MarkovChain(Matrix transitions) : m_(std::move(transitions)) {
    if (m_.rows() == 0) throw ModelError("chain must have at least one state");
    if (m_.rows() != m_.cols()) throw ModelError("transition matrix must be square");
}

ValidationReport validate_chain(const MarkovChain& chain, double tol) {
    if (!(tol >= 0.0)) throw ModelError("tolerance must be nonnegative");
    const Matrix& m = chain.transitions();
    const std::size_t k = chain.states();
    ValidationReport report;
    report.row_stochastic = true;
    for (std::size_t i = 0; i < k; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double v = m(i, j);
            if (!std::isfinite(v))
                throw ModelError("M[" + std::to_string(i) + "][" + std::to_string(j) + "] is not finite");
            if (v < -tol)
                throw ModelError("M[" + std::to_string(i) + "][" + std::to_string(j) + "] is negative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSumTolerance) report.row_stochastic = false;
    }

    const auto forward = edge_lists(m, tol, false);
    const auto level = bfs_levels(forward);
    const auto back = bfs_levels(edge_lists(m, tol, true));
    report.irreducible = true;
    for (std::size_t i = 0; i < k; ++i)
        if (level[i] < 0 || back[i] < 0) report.irreducible = false;
    if (!report.irreducible) return report;

    std::uint64_t g = 0;
    for (std::size_t u = 0; u < k; ++u)
        for (std::size_t v : forward[u]) {
            const long d = level[u] + 1 - level[v];
            g = std::gcd(g, static_cast<std::uint64_t>(d < 0 ? -d : d));
        }
    report.period = g;
    report.aperiodic = (g == 1);
    return report;
}

std::vector<double> stationary_distribution(const MarkovChain& chain) {
    const ValidationReport report = validate_chain(chain);
    if (!report.row_stochastic) throw ModelError("transition matrix is not row-stochastic");
    if (!report.irreducible || !report.aperiodic)
        throw ModelError("stationary distribution requires an irreducible aperiodic chain");

    const Matrix& m = chain.transitions();
    const std::size_t k = chain.states();
    // Rows 0..k-2: ((M - I)^T Π)_j = 0. Last row: ΣΠ = 1.
    std::vector<double> a(k * k), b(k, 0.0);
    for (std::size_t j = 0; j + 1 < k; ++j)
        for (std::size_t i = 0; i < k; ++i) a[j * k + i] = m(i, j) - (i == j ? 1.0 : 0.0);
    for (std::size_t i = 0; i < k; ++i) a[(k - 1) * k + i] = 1.0;
    b[k - 1] = 1.0;
    std::vector<double> pi = solve_dense(a, b);

    // One round of iterative refinement against the same system.
    std::vector<double> residual(k);
    for (std::size_t r = 0; r < k; ++r) {
        double s = b[r];
        for (std::size_t c = 0; c < k; ++c) s -= a[r * k + c] * pi[c];
        residual[r] = s;
    }
    const std::vector<double> correction = solve_dense(a, residual);
    for (std::size_t i = 0; i < k; ++i) pi[i] += correction[i];
    return pi;
}

Matrix l_step_matrix(const MarkovChain& chain, std::uint64_t L) {
    if (L == 0) throw ModelError("L must be positive");
    Matrix result = Matrix::identity(chain.states());
    Matrix base = chain.transitions();
    bool first = true;
    while (L > 0) {
        if (L & 1) {
            result = first ? base : result * base;
            first = false;
        }
        L >>= 1;
        if (L > 0) base = base * base;
    }
    return result;
}

double mixing_deficit(const MarkovChain& chain, std::uint64_t L) {
    const std::vector<double> pi = stationary_distribution(chain);
    const Matrix ml = l_step_matrix(chain, L);
    double worst = 0.0;
    for (std::size_t a = 0; a < chain.states(); ++a) {
        double d = 0.0;
        for (std::size_t b = 0; b < chain.states(); ++b) d += std::abs(ml(a, b) - pi[b]);
        worst = std::max(worst, d);
    }
    return worst;
}

Matrix joint_l_step(const MarkovChain& chain, std::uint64_t L) {
    const std::vector<double> pi = stationary_distribution(chain);
    Matrix rho = l_step_matrix(chain, L);
    for (std::size_t a = 0; a < chain.states(); ++a)
        for (std::size_t b = 0; b < chain.states(); ++b) rho(a, b) *= pi[a];
    return rho;
}

HiddenMarkovModel::HiddenMarkovModel(MarkovChain chain, Alphabet alphabet, Matrix emissions,
                                     std::vector<double> initial)
    : chain_(std::move(chain)), alphabet_(std::move(alphabet)), emissions_(std::move(emissions)) {
    const std::size_t k = chain_.states();
    if (alphabet_.size() == 0) throw ModelError("alphabet must not be empty");
    report_ = validate_chain(chain_);
    for (std::size_t i = 0; i < k; ++i) check_distribution(chain_.transitions().row(i), "transitions[" + std::to_string(i) + "]");
    if (emissions_.rows() != k) throw ModelError("emissions must have one row per state");
    if (emissions_.cols() != alphabet_.size()) throw ModelError("emission rows must have one entry per symbol");
    for (std::size_t i = 0; i < k; ++i) check_distribution(emissions_.row(i), "emissions[" + std::to_string(i) + "]");

    if (ergodic()) stationary_ = stationary_distribution(chain_);
    if (!initial.empty()) {
        if (initial.size() != k) throw ModelError("initial distribution must have one entry per state");
        check_distribution(initial, "initial");
        initial_ = std::move(initial);
        explicit_initial_ = true;
    } else {
        if (!ergodic())
            throw ModelError("chain is not irreducible and aperiodic; an explicit initial distribution is required");
        initial_ = stationary_;
    }
}

const std::vector<double>& HiddenMarkovModel::stationary() const {
    if (!ergodic()) throw ModelError("stationary distribution requires an irreducible aperiodic chain");
    return stationary_;
}

bool HiddenMarkovModel::state_revealing() const {
    std::vector<bool> used(alphabet_.size(), false);
    for (std::size_t z = 0; z < states(); ++z) {
        std::size_t support = 0, symbol = 0;
        for (std::size_t x = 0; x < alphabet_.size(); ++x)
            if (emissions_(z, x) > 0.0) {
                ++support;
                symbol = x;
            }
        if (support != 1 || used[symbol]) return false;
        used[symbol] = true;
    }
    return true;
}

SamplePath sample_path(const HiddenMarkovModel& hmm, std::size_t n, std::uint64_t seed, InitialLaw init) {
    const std::size_t k = hmm.states();

    auto cumulative_rows = [](const Matrix& m) {
        std::vector<std::vector<double>> rows(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) {
            rows[r].resize(m.cols());
            std::partial_sum(m.row(r).begin(), m.row(r).end(), rows[r].begin());
        }
        return rows;
    };
    const auto trans = cumulative_rows(hmm.chain().transitions());
    const auto emit = cumulative_rows(hmm.emissions());
    const std::vector<double>& start = init == InitialLaw::stationary ? hmm.stationary() : hmm.initial();
    std::vector<double> start_cdf(k);
    std::partial_sum(start.begin(), start.end(), start_cdf.begin());

    SplitMix64 rng(seed);
    SamplePath path;
    path.states.resize(n);
    path.symbols.resize(n);
    auto z = static_cast<std::uint32_t>(sample_categorical(start_cdf, rng.uniform()));
    for (std::size_t t = 0; t < n; ++t) {
        path.states[t] = z;
        path.symbols[t] = static_cast<Symbol>(sample_categorical(emit[z], rng.uniform()));
        z = static_cast<std::uint32_t>(sample_categorical(trans[z], rng.uniform()));
    }
    path.final_state = z;
    return path;
}

} // namespace lzhmm
