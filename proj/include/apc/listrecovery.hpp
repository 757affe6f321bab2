#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "apc/apcode.hpp"
#include "apc/detail/parallel.hpp"
#include "apc/detail/tuple_walk.hpp"
#include "apc/errors.hpp"
#include "apc/numeric.hpp"
#include "apc/rng.hpp"

namespace apc {

inline constexpr std::uint64_t kTupleSearchCap = 10000000;  // exhaustive certifier / exact potential

/// One tuple (Z_1,...,Z_n) of per-coordinate symbol lists, each of size
/// exactly ell. A codeword is covered when it lands outside Z_i in at most
/// floor(rho*n) coordinates.
struct ListTuple {
    int q = 0;
    int ell = 0;
    std::vector<std::vector<Symbol>> sets;

    static ListTuple make(int q, std::vector<std::vector<Symbol>> sets) {
        if (sets.empty()) throw validation_error("ListTuple: need at least one coordinate");
        const int ell = static_cast<int>(sets.front().size());
        if (ell < 1 || ell >= q) throw validation_error("ListTuple: need 1 <= ell < q", ell);
        for (auto& z : sets) {
            if (static_cast<int>(z.size()) != ell)
                throw validation_error("ListTuple: all lists must have size ell", static_cast<long long>(z.size()));
            std::sort(z.begin(), z.end());
            for (std::size_t i = 0; i < z.size(); ++i) {
                if (z[i] >= q) throw validation_error("ListTuple: symbol out of range", z[i]);
                if (i > 0 && z[i] == z[i - 1]) throw validation_error("ListTuple: duplicate symbol in list", z[i]);
            }
        }
        ListTuple t;
        t.q = q;
        t.ell = ell;
        t.sets = std::move(sets);
        return t;
    }

    int n() const { return static_cast<int>(sets.size()); }

    friend bool operator==(const ListTuple&, const ListTuple&) = default;
};

struct LRParams {
    double rho = 0.0;
    int ell = 1;
    std::uint64_t L = 1;
};

struct LRVerdict {
    std::uint64_t max_count = 0;
    ListTuple witness;
    bool exhaustive = false;
    std::uint64_t tuples_visited = 0;
};

/// "at most rho*n disagreements" with a non-integral radius means the floor;
/// the epsilon absorbs representation error in exact rationals like 1/3.
inline int mismatch_threshold(double rho, int n) {
    return static_cast<int>(std::floor(rho * n + 1e-9));
}

inline bool covers(const ListTuple& tuple, std::span<const Symbol> word, double rho) {
    const int n = tuple.n();
    if (static_cast<int>(word.size()) != n)
        throw std::domain_error("covers: word length != tuple length");
    const int thresh = mismatch_threshold(rho, n);
    int miss = 0;
    for (int i = 0; i < n; ++i) {
        const auto& z = tuple.sets[i];
        if (!std::binary_search(z.begin(), z.end(), word[i]) && ++miss > thresh) return false;
    }
    return true;
}

/// Number of message indices whose codeword the tuple covers (multiset
/// semantics: repeated words count once per message).
inline std::uint64_t intersection_count(const CodeMultiset& code, const ListTuple& tuple, double rho) {
    if (tuple.n() != code.n() || tuple.q != code.q())
        throw std::domain_error("intersection_count: tuple and code dimensions disagree");
    std::uint64_t count = 0;
    for (std::uint64_t m = 0; m < code.size(); ++m)
        if (covers(tuple, code.word(m), rho)) ++count;
    return count;
}

namespace detail {

/// Candidate lists for the column-restricted search: only symbols that occur
/// at coordinate i matter for coverage, so each list is a subset of the
/// column's symbols padded to size ell with the smallest absent symbols.
inline std::vector<std::vector<std::vector<Symbol>>> restricted_candidates(const CodeMultiset& code, int ell) {
    const int n = code.n();
    const int q = code.q();
    std::vector<std::vector<Symbol>> cols(static_cast<std::size_t>(n)), absents(static_cast<std::size_t>(n));
    std::uint64_t space = 1;
    for (int d = 0; d < n; ++d) {
        std::vector<bool> occurs(static_cast<std::size_t>(q), false);
        for (std::uint64_t w = 0; w < code.size(); ++w) occurs[code.word(w)[d]] = true;
        for (int s = 0; s < q; ++s) (occurs[s] ? cols[d] : absents[d]).push_back(static_cast<Symbol>(s));
        const int t_min = std::max(0, ell - static_cast<int>(absents[d].size()));
        const int t_max = std::min<int>(ell, static_cast<int>(cols[d].size()));
        std::uint64_t count = 0;
        for (int t = t_min; t <= t_max; ++t)
            count += binomial_saturating(cols[d].size(), static_cast<std::uint64_t>(t), kTupleSearchCap + 1);
        space = mul_saturating(space, count, kTupleSearchCap + 1);
    }
    if (space > kTupleSearchCap)
        throw capacity_error("max_intersection_exhaustive: tuple space exceeds the cap of " +
                             std::to_string(kTupleSearchCap) + "; use the randomized search");
    std::vector<std::vector<std::vector<Symbol>>> out(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        const std::vector<Symbol>& col = cols[d];
        const std::vector<Symbol>& absent = absents[d];
        const int t_min = std::max(0, ell - static_cast<int>(absent.size()));
        const int t_max = std::min<int>(ell, static_cast<int>(col.size()));
        auto& cands = out[d];
        for (int t = t_min; t <= t_max; ++t) {
            // all size-t combinations of the column symbols, padded to ell
            std::vector<int> pick(static_cast<std::size_t>(t));
            for (int i = 0; i < t; ++i) pick[i] = i;
            for (;;) {
                std::vector<Symbol> z;
                z.reserve(static_cast<std::size_t>(ell));
                for (int i = 0; i < t; ++i) z.push_back(col[pick[i]]);
                for (int i = 0; i < ell - t; ++i) z.push_back(absent[i]);
                std::sort(z.begin(), z.end());
                cands.push_back(std::move(z));
                if (t == 0) break;
                int j = t - 1;
                while (j >= 0 && pick[j] == static_cast<int>(col.size()) - t + j) --j;
                if (j < 0) break;
                ++pick[j];
                for (int i = j + 1; i < t; ++i) pick[i] = pick[i - 1] + 1;
            }
        }
        std::sort(cands.begin(), cands.end());
    }
    return out;
}

inline LRVerdict run_max_search(const CodeMultiset& code, double rho,
                                std::vector<std::vector<std::vector<Symbol>>> candidates, const char* name) {
    std::uint64_t space = 1;
    for (const auto& c : candidates) space = mul_saturating(space, c.size(), std::numeric_limits<std::uint64_t>::max());
    if (space > kTupleSearchCap)
        throw capacity_error(std::string(name) + ": tuple space of " + std::to_string(space) + " exceeds the cap of " +
                             std::to_string(kTupleSearchCap) + "; use the randomized search");

    const TupleWalk walk(code, mismatch_threshold(rho, code.n()), std::move(candidates));
    struct Partial {
        std::uint64_t best = 0;
        std::vector<std::size_t> idx;
        bool any = false;
    };
    const std::size_t chunks = walk.candidates()[0].size();
    std::vector<Partial> partials(chunks);
    run_chunks(chunks, [&](std::uint64_t c) {
        Partial& p = partials[c];
        walk.walk_range(c, c + 1, [&](std::uint64_t covered, const std::vector<std::size_t>& idx) {
            if (!p.any || covered > p.best) {
                p.best = covered;
                p.idx = idx;
                p.any = true;
            }
        });
    });
    // lexicographically first maximizer: chunk order is first-coordinate
    // order, and the walk within a chunk is lexicographic
    const Partial* best = nullptr;
    for (const auto& p : partials)
        if (p.any && (best == nullptr || p.best > best->best)) best = &p;

    LRVerdict verdict;
    verdict.max_count = best->best;
    verdict.exhaustive = true;
    verdict.tuples_visited = space;
    std::vector<std::vector<Symbol>> sets;
    sets.reserve(best->idx.size());
    for (std::size_t d = 0; d < best->idx.size(); ++d) sets.push_back(walk.candidates()[d][best->idx[d]]);
    verdict.witness = ListTuple::make(code.q(), std::move(sets));
    return verdict;
}

}  // namespace detail

/// Exact maximum of intersection_count over every size-ell list tuple,
/// searched over the column-restricted candidate space (swapping a symbol
/// that never occurs in a column for another absent one cannot change
/// coverage, so the restriction loses nothing).
inline LRVerdict max_intersection_exhaustive(const CodeMultiset& code, double rho, int ell) {
    if (ell < 1 || ell >= code.q()) throw std::domain_error("max_intersection_exhaustive: need 1 <= ell < q");
    return detail::run_max_search(code, rho, detail::restricted_candidates(code, ell),
                                  "max_intersection_exhaustive");
}

/// Reference enumerator over the full C(q,ell)^n tuple space, no column
/// restriction. Slower; used to cross-check the restricted search.
inline LRVerdict max_intersection_naive(const CodeMultiset& code, double rho, int ell) {
    if (ell < 1 || ell >= code.q()) throw std::domain_error("max_intersection_naive: need 1 <= ell < q");
    const std::uint64_t per_coord =
        binomial_saturating(static_cast<std::uint64_t>(code.q()), static_cast<std::uint64_t>(ell),
                            kTupleSearchCap + 1);
    std::uint64_t space = 1;
    for (int d = 0; d < code.n(); ++d) space = mul_saturating(space, per_coord, kTupleSearchCap + 1);
    if (space > kTupleSearchCap)
        throw capacity_error("max_intersection_naive: tuple space exceeds the cap of " +
                             std::to_string(kTupleSearchCap) + "; use the randomized search");
    std::vector<std::vector<std::vector<Symbol>>> candidates(
        static_cast<std::size_t>(code.n()), detail::all_subsets(code.q(), ell));
    return detail::run_max_search(code, rho, std::move(candidates), "max_intersection_naive");
}

/// Witness search for scales where exhaustion is infeasible: seed a tuple
/// from the most frequent symbols of L+1 random codewords, then hill-climb
/// by single-symbol swaps. max_count is a lower bound on the true maximum.
inline LRVerdict max_intersection_randomized(const CodeMultiset& code, double rho, int ell, std::uint64_t L,
                                             std::uint64_t trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("max_intersection_randomized: trials must be >= 1");
    if (ell < 1 || ell >= code.q()) throw std::domain_error("max_intersection_randomized: need 1 <= ell < q");
    const int n = code.n();
    const int q = code.q();
    const std::uint64_t words = code.size();
    const int thresh = mismatch_threshold(rho, n);
    const std::uint64_t picks = std::min<std::uint64_t>(L + 1, words);

    LRVerdict best;
    best.exhaustive = false;
    bool have_best = false;

    std::vector<std::uint64_t> picked;
    std::vector<std::uint32_t> freq(static_cast<std::size_t>(q));
    std::vector<std::uint16_t> mism(words);
    for (std::uint64_t t = 0; t < trials; ++t) {
        picked.clear();
        if (picks == words) {
            for (std::uint64_t w = 0; w < words; ++w) picked.push_back(w);
        } else {
            while (picked.size() < picks) {
                const std::uint64_t w = next_below(rng, words);
                if (std::find(picked.begin(), picked.end(), w) == picked.end()) picked.push_back(w);
            }
        }
        // greedy seed: per coordinate take the ell most frequent symbols of
        // the picked words; lowest symbol value wins frequency ties
        std::vector<std::vector<Symbol>> sets(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) {
            std::fill(freq.begin(), freq.end(), 0);
            for (const std::uint64_t w : picked) ++freq[code.word(w)[d]];
            std::vector<Symbol> order(static_cast<std::size_t>(q));
            for (int s = 0; s < q; ++s) order[s] = static_cast<Symbol>(s);
            std::stable_sort(order.begin(), order.end(),
                             [&](Symbol a, Symbol b) { return freq[a] > freq[b]; });
            sets[d].assign(order.begin(), order.begin() + ell);
            std::sort(sets[d].begin(), sets[d].end());
        }
        // current coverage state
        std::fill(mism.begin(), mism.end(), 0);
        for (std::uint64_t w = 0; w < words; ++w) {
            const auto word = code.word(w);
            for (int d = 0; d < n; ++d)
                if (!std::binary_search(sets[d].begin(), sets[d].end(), word[d])) ++mism[w];
        }
        auto covered_now = [&] {
            std::uint64_t c = 0;
            for (std::uint64_t w = 0; w < words; ++w)
                if (mism[w] <= thresh) ++c;
            return c;
        };
        std::uint64_t covered = covered_now();
        bool improved = true;
        while (improved) {
            improved = false;
            for (int d = 0; d < n && !improved; ++d) {
                for (std::size_t oi = 0; oi < sets[d].size() && !improved; ++oi) {
                    const Symbol out = sets[d][oi];
                    for (int sin = 0; sin < q && !improved; ++sin) {
                        const Symbol in = static_cast<Symbol>(sin);
                        if (std::binary_search(sets[d].begin(), sets[d].end(), in)) continue;
                        std::uint64_t cand_cov = 0;
                        for (std::uint64_t w = 0; w < words; ++w) {
                            const Symbol s = code.word(w)[d];
                            int m = mism[w];
                            if (s == out) ++m;
                            else if (s == in) --m;
                            if (m <= thresh) ++cand_cov;
                        }
                        if (cand_cov > covered) {
                            for (std::uint64_t w = 0; w < words; ++w) {
                                const Symbol s = code.word(w)[d];
                                if (s == out) ++mism[w];
                                else if (s == in) --mism[w];
                            }
                            sets[d].erase(std::find(sets[d].begin(), sets[d].end(), out));
                            sets[d].insert(std::upper_bound(sets[d].begin(), sets[d].end(), in), in);
                            covered = cand_cov;
                            improved = true;
                        }
                    }
                }
            }
        }
        if (!have_best || covered > best.max_count) {
            best.max_count = covered;
            best.witness = ListTuple::make(q, sets);
            have_best = true;
        }
        best.tuples_visited += 1;
    }
    return best;
}

/// Exhaustive certificate: true iff no tuple covers more than L codewords.
inline std::pair<bool, LRVerdict> is_list_recoverable(const CodeMultiset& code, const LRParams& params) {
    LRVerdict v = max_intersection_exhaustive(code, params.rho, params.ell);
    return {v.max_count <= params.L, std::move(v)};
}

/// Randomized certificate: "true" only means no witness was found.
inline std::pair<bool, LRVerdict> is_list_recoverable_randomized(const CodeMultiset& code, const LRParams& params,
                                                                 std::uint64_t trials, Rng& rng) {
    LRVerdict v = max_intersection_randomized(code, params.rho, params.ell, params.L, trials, rng);
    return {v.max_count <= params.L, std::move(v)};
}

/// The list-recovery capacity function: the largest achievable rate against
/// error fraction rho with per-coordinate lists of size ell over a q-ary
/// alphabet. Value 1 beyond the rho = 1 - ell/q breakpoint; the rho = 0 and
/// rho = 1 endpoints take their continuous limits (0*log(x/0) := 0).
inline double capacity(int q, int ell, double rho) {
    if (ell < 1 || ell >= q) throw std::domain_error("capacity: need 1 <= ell < q");
    if (rho < 0.0 || rho > 1.0) throw std::domain_error("capacity: need 0 <= rho <= 1");
    const double breakpoint = 1.0 - static_cast<double>(ell) / q;
    if (rho > breakpoint) return 1.0;
    const double lq = std::log(static_cast<double>(q));
    double value = 0.0;
    if (rho > 0.0) value += rho * (std::log(static_cast<double>(q - ell)) - std::log(rho)) / lq;
    if (rho < 1.0) value += (1.0 - rho) * (std::log(static_cast<double>(ell)) - std::log1p(-rho)) / lq;
    return value;
}

/// Smallest eta the rate formula supports at blocklength n.
inline double eta_min(int q, int n) {
    if (q < 2 || n < 1) throw std::domain_error("eta_min: need q >= 2 and n >= 1");
    return 2.0 * std::log(2.0 * n / std::numbers::ln2_v<double>) / (n * std::log(static_cast<double>(q)));
}

struct RatePlan {
    double R = 0.0;
    long long k = 0;
    bool k_integral = false;  // whether R * log2(q) * n landed on an integer
};

/// Rate and message length for the target parameters. Requires eta >=
/// eta_min(q, n) and a positive resulting rate.
inline RatePlan rate_and_k(int q, int ell, double rho, std::uint64_t L, int n, double eta) {
    if (ell < 1 || ell >= q) throw std::domain_error("rate_and_k: need 1 <= ell < q");
    if (static_cast<std::uint64_t>(ell) > L) throw std::domain_error("rate_and_k: need ell <= L");
    if (eta < eta_min(q, n) - 1e-12)
        throw std::invalid_argument("rate_and_k: eta = " + std::to_string(eta) + " is below eta_min(q, n) = " +
                                    std::to_string(eta_min(q, n)));
    const double log_q_choose = ln_binomial(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(ell)) /
                                std::log(static_cast<double>(q));
    const double R = 1.0 - capacity(q, ell, rho) -
                     (log_q_choose + 1.0 / n) / (static_cast<double>(L) + 1.0) - eta;
    if (R <= 0.0)
        throw infeasible_error("rate_and_k: parameters give non-positive rate (deficit " + std::to_string(-R) + ")",
                               -R);
    const double k_exact = R * std::log2(static_cast<double>(q)) * n;
    RatePlan plan;
    plan.R = R;
    plan.k = static_cast<long long>(std::floor(k_exact + 1e-9));
    plan.k_integral = std::abs(k_exact - std::round(k_exact)) <= 1e-9;
    if (plan.k < 1)
        throw infeasible_error("rate_and_k: rate too small for even one message bit (k_exact = " +
                                   std::to_string(k_exact) + ")",
                               1.0 - k_exact);
    return plan;
}

}  // namespace apc
