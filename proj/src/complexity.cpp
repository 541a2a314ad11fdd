#include "lzhmm/complexity.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "lzhmm/bits.hpp"
#include "lzhmm/error.hpp"

namespace lzhmm {

namespace {

class DistinctSearch {
public:
    DistinctSearch(std::span<const Symbol> x, std::size_t alphabet_size) : x_(x.begin(), x.end()) {
        const std::size_t n = x_.size();
        // max_more_[r] bounds how many distinct nonempty substrings of X fit in r symbols:
        // take as many of the shortest available lengths as possible.
        max_more_.assign(n + 1, 0);
        for (std::size_t r = 1; r <= n; ++r) {
            std::size_t budget = r, count = 0;
            for (std::size_t len = 1; len <= r && budget >= len; ++len) {
                double avail = std::min(std::pow(static_cast<double>(alphabet_size), static_cast<double>(len)),
                                        static_cast<double>(n - len + 1));
                const auto take = static_cast<std::size_t>(std::min(avail, static_cast<double>(budget / len)));
                count += take;
                budget -= take * len;
                if (take < avail) break;
            }
            max_more_[r] = count;
        }
    }

    DistinctParse run() {
        if (!x_.empty()) descend(0);
        DistinctParse result;
        result.t = best_.size();
        for (const auto& [start, len] : best_) result.witness.pieces.emplace_back(x_.begin() + start, x_.begin() + start + len);
        return result;
    }

private:
    void descend(std::size_t pos) {
        const std::size_t n = x_.size();
        if (pos == n) {
            if (current_.size() > best_.size()) best_ = current_;
            return;
        }
        if (current_.size() + max_more_[n - pos] <= best_.size()) return;
        for (std::size_t len = 1; pos + len <= n; ++len) {
            std::u32string piece(x_.begin() + pos, x_.begin() + pos + len);
            if (used_.count(piece)) continue;
            auto it = used_.insert(std::move(piece)).first;
            current_.emplace_back(pos, len);
            descend(pos + len);
            current_.pop_back();
            used_.erase(it);
            if (current_.size() + max_more_[n - pos] <= best_.size()) return;
        }
    }

    std::u32string x_;
    std::vector<std::size_t> max_more_;
    std::set<std::u32string> used_;
    std::vector<std::pair<std::size_t, std::size_t>> current_, best_;
};

} // namespace

SymbolSeq Decomposition::concatenated() const {
    SymbolSeq out;
    for (const SymbolSeq& p : pieces) out.insert(out.end(), p.begin(), p.end());
    return out;
}

bool Decomposition::valid() const {
    std::set<SymbolSeq> seen;
    for (const SymbolSeq& p : pieces) {
        if (p.empty()) return false;
        if (!seen.insert(p).second) return false;
    }
    return true;
}

DistinctParse max_distinct_parse(std::span<const Symbol> x, std::size_t alphabet_size, std::size_t n_cap) {
    if (x.size() > n_cap)
        throw CapacityError("exact complexity search is capped at n = " + std::to_string(n_cap) +
                            "; use sqrt_parse or the LZ phrase count as lower bounds");
    check_symbols(x, alphabet_size);
    return DistinctSearch(x, alphabet_size).run();
}

Decomposition sqrt_parse(std::span<const Symbol> x) {
    const std::size_t n = x.size();
    if (n == 0) throw Error("sqrt_parse needs a nonempty string");
    std::size_t s = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    Decomposition d;
    std::size_t pos = 0;
    for (std::size_t len = 1; len < s; ++len) {
        d.pieces.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(pos), x.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    d.pieces.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(pos), x.end());
    return d;
}

std::uint64_t lz_length_bound(std::uint64_t m, std::size_t alphabet_size) {
    if (m == 0) throw Error("lz_length_bound needs m >= 1");
    const SymbolCodec codec(alphabet_size);
    const auto index_bits = static_cast<std::uint64_t>(std::bit_width(m));  // ⌈log2(m+1)⌉
    const auto loglog = static_cast<std::uint64_t>(std::ceil(std::log2(std::log2(static_cast<double>(m) + 1.0) + 1.0)));
    return m * (index_bits + 2 * loglog + 3 + codec.width());
}

} // namespace lzhmm
