#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "apc/apcode.hpp"
#include "apc/detail/parallel.hpp"
#include "apc/detail/tuple_walk.hpp"
#include "apc/ensemble.hpp"
#include "apc/errors.hpp"
#include "apc/listrecovery.hpp"
#include "apc/numeric.hpp"
#include "apc/rng.hpp"

namespace apc {

inline constexpr std::uint64_t kMixingTupleCap = 1000000;   // exact/sampled image-tuple space
inline constexpr std::uint64_t kMixingScanCap = 10000;      // full source scan below this
inline constexpr std::uint64_t kProductMapCap = 1000000;    // (support size)^n in recurrence checks

/// Parameters of the potential K_C = mean over list tuples B of
/// q^(alpha * n * |C ∩ B|). alpha is pinned so that an intersection of L+1
/// already forces K >= q; beta bounds the per-tuple coverage mass.
struct PotentialParams {
    int q = 0;
    int n = 0;
    int ell = 0;
    std::uint64_t L = 0;
    double rho = 0.0;
    double alpha = 0.0;    // (log_q |B| + 1) / ((L+1) * n)
    double beta = 0.0;     // capacity(q, ell, rho)
    double log_q_B = 0.0;  // n * log_q C(q, ell); |B| = C(q, ell)^n tuples
};

inline PotentialParams make_params(int q, int n, int ell, std::uint64_t L, double rho) {
    if (ell < 1 || ell >= q) throw std::domain_error("make_params: need 1 <= ell < q");
    if (n < 1) throw std::domain_error("make_params: need n >= 1");
    PotentialParams p;
    p.q = q;
    p.n = n;
    p.ell = ell;
    p.L = L;
    p.rho = rho;
    p.log_q_B = n * ln_binomial(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(ell)) /
                std::log(static_cast<double>(q));
    p.alpha = (p.log_q_B + 1.0) / ((static_cast<double>(L) + 1.0) * n);
    p.beta = capacity(q, ell, rho);
    return p;
}

struct PotentialValue {
    double log_k = 0.0;  // natural log of K
    std::optional<double> linear;
    TestMode mode = TestMode::exact;
    std::uint64_t trials = 0;
    std::uint64_t tuples = 0;

    static PotentialValue from_log(double log_k, TestMode mode, std::uint64_t trials, std::uint64_t tuples) {
        PotentialValue v;
        v.log_k = log_k;
        v.mode = mode;
        v.trials = trials;
        v.tuples = tuples;
        if (log_k < 300.0 * std::numbers::ln10_v<double>) v.linear = std::exp(log_k);
        return v;
    }
};

namespace detail {

inline std::uint64_t unrestricted_space(int q, int ell, int n, std::uint64_t cap) {
    const std::uint64_t per =
        binomial_saturating(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(ell), cap + 1);
    std::uint64_t space = 1;
    for (int d = 0; d < n; ++d) space = mul_saturating(space, per, cap + 1);
    return space;
}

/// Sort-free log-sum-exp partials: (running max exponent, sum rescaled to it).
struct LseAccum {
    double max_e = -std::numeric_limits<double>::infinity();
    double sum = 0.0;

    void add(double e) {
        if (e <= max_e) {
            sum += std::exp(e - max_e);
        } else {
            sum = sum * std::exp(max_e - e) + 1.0;
            max_e = e;
        }
    }

    void merge(const LseAccum& other) {
        if (other.sum == 0.0) return;
        if (max_e >= other.max_e) {
            sum += other.sum * std::exp(other.max_e - max_e);
        } else {
            sum = sum * std::exp(max_e - other.max_e) + other.sum;
            max_e = other.max_e;
        }
    }

    double log_total() const { return max_e + std::log(sum); }
};

}  // namespace detail

/// The potential of a code multiset. Exact mode averages over every list
/// tuple (the C(q,ell)^n of them); exponents are carried in log space, so
/// codes with huge intersections do not overflow. Sampled mode is a uniform
/// Monte Carlo estimate over tuples.
inline PotentialValue potential_K(const CodeMultiset& code, const PotentialParams& p, TestMode mode,
                                  std::uint64_t trials = 0, Rng* rng = nullptr) {
    if (code.q() != p.q || code.n() != p.n)
        throw std::domain_error("potential_K: code dimensions disagree with params");
    const double scale = p.alpha * p.n * std::log(static_cast<double>(p.q));
    if (mode == TestMode::exact) {
        const std::uint64_t space = detail::unrestricted_space(p.q, p.ell, p.n, kTupleSearchCap);
        if (space > kTupleSearchCap)
            throw capacity_error("potential_K: tuple space exceeds the cap of " + std::to_string(kTupleSearchCap));
        std::vector<std::vector<std::vector<Symbol>>> candidates(
            static_cast<std::size_t>(p.n), detail::all_subsets(p.q, p.ell));
        const detail::TupleWalk walk(code, mismatch_threshold(p.rho, p.n), std::move(candidates));
        const std::size_t chunks = walk.candidates()[0].size();
        std::vector<detail::LseAccum> partials(chunks);
        detail::run_chunks(chunks, [&](std::uint64_t c) {
            detail::LseAccum& acc = partials[c];
            walk.walk_range(c, c + 1, [&](std::uint64_t covered, const std::vector<std::size_t>&) {
                acc.add(scale * static_cast<double>(covered));
            });
        });
        detail::LseAccum total;
        for (const auto& acc : partials) total.merge(acc);
        return PotentialValue::from_log(total.log_total() - std::log(static_cast<double>(space)), mode, 0, space);
    }
    if (trials < 1) throw std::invalid_argument("potential_K: sampled mode needs trials >= 1");
    if (rng == nullptr) throw std::invalid_argument("potential_K: sampled mode needs a generator");
    detail::LseAccum acc;
    std::vector<Symbol> pool(static_cast<std::size_t>(p.q));
    std::vector<std::vector<Symbol>> sets(static_cast<std::size_t>(p.n));
    for (std::uint64_t t = 0; t < trials; ++t) {
        for (int d = 0; d < p.n; ++d) {
            for (int s = 0; s < p.q; ++s) pool[s] = static_cast<Symbol>(s);
            for (int i = 0; i < p.ell; ++i) {
                const auto j = i + next_below(*rng, static_cast<std::uint64_t>(p.q - i));
                std::swap(pool[i], pool[j]);
            }
            sets[d].assign(pool.begin(), pool.begin() + p.ell);
            std::sort(sets[d].begin(), sets[d].end());
        }
        const ListTuple tuple = ListTuple::make(p.q, sets);
        acc.add(scale * static_cast<double>(intersection_count(code, tuple, p.rho)));
    }
    return PotentialValue::from_log(acc.log_total() - std::log(static_cast<double>(trials)), mode, trials, 0);
}

/// Checks both directions of the small-potential certificate on one code:
/// K < 2 must force max intersection <= L, and any intersection of L+1 must
/// force K >= q.
inline bool small_potential_certifies_lr(const CodeMultiset& code, const PotentialParams& p) {
    const PotentialValue K = potential_K(code, p, TestMode::exact);
    const LRVerdict v = max_intersection_exhaustive(code, p.rho, p.ell);
    bool ok = true;
    if (K.log_k < std::numbers::ln2_v<double>) ok = ok && (v.max_count <= p.L);
    if (v.max_count >= p.L + 1)
        ok = ok && (K.log_k >= std::log(static_cast<double>(p.q)) * (1.0 - 1e-9) - 1e-12);
    return ok;
}

struct RecurrenceReport {
    double lhs = 0.0;         // E over product maps of K(C ∪ tau(C)), tau-major summation
    double rhs = 0.0;         // K(C)^2
    double lhs_fubini = 0.0;  // same expectation, tuple-major summation
    double k_prev = 0.0;
};

/// Exact one-step expectation of the potential after doubling C with an
/// independent product map from the ensemble. For an ensemble whose power
/// mixes the tuple family, lhs <= rhs (with equality); for other ensembles
/// the numbers are reported without any claim.
inline RecurrenceReport verify_recurrence(const CodeMultiset& c_prev, const Ensemble& e, const PotentialParams& p) {
    if (c_prev.q() != p.q || c_prev.n() != p.n)
        throw std::domain_error("verify_recurrence: code dimensions disagree with params");
    if (e.q() != p.q) throw std::domain_error("verify_recurrence: ensemble alphabet disagrees with params");
    const auto support = e.enumerate_support();
    const int n = p.n;
    std::uint64_t tau_space = 1;
    for (int d = 0; d < n; ++d) tau_space = mul_saturating(tau_space, support.size(), kProductMapCap + 1);
    if (tau_space > kProductMapCap)
        throw capacity_error("verify_recurrence: (support size)^n exceeds the cap of " +
                             std::to_string(kProductMapCap));
    const std::uint64_t b_space = detail::unrestricted_space(p.q, p.ell, n, kTupleSearchCap);
    if (b_space > kTupleSearchCap)
        throw capacity_error("verify_recurrence: tuple space exceeds the cap of " + std::to_string(kTupleSearchCap));

    const double scale = p.alpha * n * std::log(static_cast<double>(p.q));
    const int thresh = mismatch_threshold(p.rho, n);
    const auto count_all = [&](const CodeMultiset& code) {
        std::vector<std::uint32_t> counts;
        counts.reserve(b_space);
        std::vector<std::vector<std::vector<Symbol>>> candidates(
            static_cast<std::size_t>(n), detail::all_subsets(p.q, p.ell));
        const detail::TupleWalk walk(code, thresh, std::move(candidates));
        walk.walk([&](std::uint64_t covered, const std::vector<std::size_t>&) {
            counts.push_back(static_cast<std::uint32_t>(covered));
        });
        return counts;
    };

    const std::vector<std::uint32_t> cnt_prev = count_all(c_prev);
    long double k_prev = 0.0L;
    for (const std::uint32_t c : cnt_prev) k_prev += std::exp(static_cast<long double>(scale) * c);
    k_prev /= static_cast<long double>(b_space);

    // walk all product maps tau = (pi_1, ..., pi_n) over the support
    std::vector<std::size_t> tau_idx(static_cast<std::size_t>(n), 0);
    long double lhs = 0.0L;
    std::vector<long double> by_tuple(cnt_prev.size(), 0.0L);  // tuple-major accumulation
    const std::uint64_t words = c_prev.size();
    for (;;) {
        double weight = 1.0;
        for (int d = 0; d < n; ++d) weight *= support[tau_idx[d]].second;
        // tau applied coordinate-wise to every word of c_prev
        std::vector<Symbol> mapped(words * static_cast<std::uint64_t>(n));
        for (std::uint64_t w = 0; w < words; ++w) {
            const auto word = c_prev.word(w);
            for (int d = 0; d < n; ++d)
                mapped[w * static_cast<std::uint64_t>(n) + d] = support[tau_idx[d]].first(word[d]);
        }
        const CodeMultiset c_mapped = CodeMultiset::from_flat(p.q, n, c_prev.k(), std::move(mapped));
        const std::vector<std::uint32_t> cnt_tau = count_all(c_mapped);
        long double k_union = 0.0L;
        for (std::size_t b = 0; b < cnt_prev.size(); ++b) {
            const long double a = std::exp(static_cast<long double>(scale) * (cnt_prev[b] + cnt_tau[b]));
            k_union += a;
            by_tuple[b] += static_cast<long double>(weight) * a;
        }
        lhs += static_cast<long double>(weight) * (k_union / static_cast<long double>(b_space));

        int d = n - 1;
        while (d >= 0 && tau_idx[d] == support.size() - 1) tau_idx[d--] = 0;
        if (d < 0) break;
        ++tau_idx[d];
    }
    long double lhs_fubini = 0.0L;
    for (const long double v : by_tuple) lhs_fubini += v;
    lhs_fubini /= static_cast<long double>(b_space);

    RecurrenceReport report;
    report.lhs = static_cast<double>(lhs);
    report.rhs = static_cast<double>(k_prev * k_prev);
    report.lhs_fubini = static_cast<double>(lhs_fubini);
    report.k_prev = static_cast<double>(k_prev);
    if (!std::isfinite(report.lhs) || !std::isfinite(report.rhs))
        throw capacity_error("verify_recurrence: potential overflows linear range at these parameters");
    return report;
}

struct MixingReport {
    bool condition1_ok = false;  // images of list tuples are list tuples
    double condition2_tv = 0.0;  // worst TV between image-tuple law and uniform
    TestMode mode = TestMode::exact;
    ListTuple worst_source;
    bool canonical_only = true;  // condition 2 checked on the canonical source only
    std::uint64_t trials = 0;
};

namespace detail {

/// TV between the product of per-coordinate subset laws and the uniform law
/// on the tuple space. rows[i] is the image distribution of coordinate i's
/// source subset over all size-ell subsets.
inline double product_tv(const std::vector<const std::vector<double>*>& rows, std::uint64_t space) {
    const double u = 1.0 / static_cast<double>(space);
    const int n = static_cast<int>(rows.size());
    // zero partial products cover whole subtrees: each contributes exactly u
    std::vector<std::uint64_t> below(static_cast<std::size_t>(n) + 1, 1);
    for (int d = n - 1; d >= 0; --d) below[d] = below[d + 1] * rows[d]->size();
    double tv = 0.0;
    auto descend = [&](auto&& self, int d, double partial) -> void {
        if (partial == 0.0) {
            tv += static_cast<double>(below[d]) * u;
            return;
        }
        if (d == n) {
            tv += std::abs(partial - u);
            return;
        }
        for (const double w : *rows[d]) self(self, d + 1, partial * w);
    };
    descend(descend, 0, 1.0);
    return 0.5 * tv;
}

}  // namespace detail

/// Does the ensemble's coordinate-wise power mix the family of list tuples?
/// Condition 1 (closure) holds structurally: a product map sends
/// (Z_1,...,Z_n) to (pi_1(Z_1),...,pi_n(Z_n)), which is again a list tuple;
/// it is asserted here by direct image computation. Condition 2 measures the
/// TV distance between the image-tuple law and uniform, for the canonical
/// source (Z_i = {0,...,ell-1}) and, in exact mode on small spaces, for every
/// source up to per-coordinate reordering.
inline MixingReport test_mixing(const Ensemble& e, int n, double rho, int ell, TestMode mode,
                                std::uint64_t trials = 0, Rng* rng = nullptr) {
    (void)rho;  // tuple-space mixing does not depend on the radius
    const int q = e.q();
    if (ell < 1 || ell >= q) throw std::domain_error("test_mixing: need 1 <= ell < q");
    if (n < 1) throw std::domain_error("test_mixing: need n >= 1");
    const auto subsets = detail::all_subsets(q, ell);
    const std::uint64_t S = subsets.size();
    std::uint64_t space = 1;
    for (int d = 0; d < n; ++d) space = mul_saturating(space, S, kMixingTupleCap + 1);
    if (space > kMixingTupleCap)
        throw capacity_error("test_mixing: image-tuple space exceeds the cap of " + std::to_string(kMixingTupleCap));

    const auto subset_rank = [&](std::vector<Symbol> img) {
        std::sort(img.begin(), img.end());
        const auto it = std::lower_bound(subsets.begin(), subsets.end(), img);
        return static_cast<std::uint64_t>(it - subsets.begin());
    };
    const auto image_of = [&](const Permutation& pi, const std::vector<Symbol>& z) {
        std::vector<Symbol> img(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) img[i] = pi(z[i]);
        return img;
    };

    MixingReport report;
    report.mode = mode;
    const std::vector<std::vector<Symbol>> canonical_sets(static_cast<std::size_t>(n), subsets.front());
    report.worst_source = ListTuple::make(q, canonical_sets);

    if (mode == TestMode::exact) {
        const auto support = e.enumerate_support();
        // condition 1 on every support permutation against the canonical tuple
        report.condition1_ok = true;
        for (const auto& [pi, w] : support) {
            std::vector<Symbol> img = image_of(pi, subsets.front());
            std::sort(img.begin(), img.end());
            const bool valid = std::adjacent_find(img.begin(), img.end()) == img.end() &&
                               static_cast<int>(img.size()) == ell;
            if (!valid || subset_rank(img) >= S) report.condition1_ok = false;
        }
        // image distribution of each source subset under one draw
        std::vector<std::vector<double>> law(S, std::vector<double>(S, 0.0));
        for (std::uint64_t s = 0; s < S; ++s)
            for (const auto& [pi, w] : support) law[s][subset_rank(image_of(pi, subsets[s]))] += w;

        const std::vector<double>* canonical_row = &law[0];
        report.condition2_tv =
            detail::product_tv(std::vector<const std::vector<double>*>(static_cast<std::size_t>(n), canonical_row),
                               space);
        if (space <= kMixingScanCap) {
            // coordinates are exchangeable under an i.i.d. power, so scanning
            // sources up to reordering loses nothing
            report.canonical_only = false;
            std::vector<std::uint64_t> src(static_cast<std::size_t>(n), 0);  // non-decreasing indices
            for (;;) {
                std::vector<const std::vector<double>*> rows;
                rows.reserve(static_cast<std::size_t>(n));
                for (int d = 0; d < n; ++d) rows.push_back(&law[src[d]]);
                const double tv = detail::product_tv(rows, space);
                if (tv > report.condition2_tv) {
                    report.condition2_tv = tv;
                    std::vector<std::vector<Symbol>> sets;
                    sets.reserve(static_cast<std::size_t>(n));
                    for (int d = 0; d < n; ++d) sets.push_back(subsets[src[d]]);
                    report.worst_source = ListTuple::make(q, std::move(sets));
                }
                int d = n - 1;
                while (d >= 0 && src[d] == S - 1) --d;
                if (d < 0) break;
                const std::uint64_t v = src[d] + 1;
                for (int i = d; i < n; ++i) src[i] = v;
            }
        }
        return report;
    }

    if (trials < 1) throw std::invalid_argument("test_mixing: sampled mode needs trials >= 1");
    if (rng == nullptr) throw std::invalid_argument("test_mixing: sampled mode needs a generator");
    report.trials = trials;
    report.condition1_ok = true;
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(space), 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::uint64_t index = 0;
        for (int d = 0; d < n; ++d) {
            const Permutation pi = e.sample(*rng);
            std::vector<Symbol> img = image_of(pi, subsets.front());
            std::sort(img.begin(), img.end());
            if (std::adjacent_find(img.begin(), img.end()) != img.end()) report.condition1_ok = false;
            index = index * S + subset_rank(img);
        }
        ++counts[index];
    }
    const double u = 1.0 / static_cast<double>(space);
    double tv = 0.0;
    for (const std::uint32_t c : counts) tv += std::abs(static_cast<double>(c) / static_cast<double>(trials) - u);
    report.condition2_tv = 0.5 * tv;
    return report;
}

struct LambdaTrace {
    std::vector<double> lambda;
    bool bound_ok = false;  // lambda_k <= 2^(k+1) * lambda_0
};

/// The slow-growth envelope lambda_i = 2*lambda_{i-1} + lambda_{i-1}^1.5,
/// checked against its doubling bound.
inline LambdaTrace lambda_trace(double lambda0, int k) {
    if (lambda0 < 0.0) throw std::domain_error("lambda_trace: lambda0 must be >= 0");
    if (k < 0) throw std::domain_error("lambda_trace: k must be >= 0");
    LambdaTrace trace;
    trace.lambda.resize(static_cast<std::size_t>(k) + 1);
    trace.lambda[0] = lambda0;
    for (int i = 1; i <= k; ++i) {
        const double prev = trace.lambda[i - 1];
        trace.lambda[i] = 2.0 * prev + std::pow(prev, 1.5);
    }
    const double bound = std::ldexp(lambda0, k + 1);
    trace.bound_ok = trace.lambda[static_cast<std::size_t>(k)] <= bound * (1.0 + 1e-12);
    return trace;
}

/// Probability that the all-zeros word is covered by a uniformly random list
/// tuple: the tail of Binomial(n, ell/q) with at least n - floor(rho*n)
/// successes. Always at most q^((beta-1)*n).
inline double zero_membership_probability(int q, int n, int ell, double rho) {
    if (ell < 1 || ell >= q) throw std::domain_error("zero_membership_probability: need 1 <= ell < q");
    if (n < 1) throw std::domain_error("zero_membership_probability: need n >= 1");
    const int thresh = mismatch_threshold(rho, n);
    const double p = binomial_tail_at_least(n, n - thresh, static_cast<double>(ell) / q);
    const double beta = capacity(q, ell, rho);
    const double bound = std::pow(static_cast<double>(q), (beta - 1.0) * n);
    if (p > bound * (1.0 + 1e-9))
        throw std::logic_error("zero_membership_probability: coverage bound violated (p = " + std::to_string(p) +
                               ", bound = " + std::to_string(bound) + ")");
    return p;
}

struct FailureBound {
    double raw = 0.0;    // sqrt(2) * k * q^(-eta n / 2)
    double value = 0.0;  // clamped to [0, 1]
    bool vacuous = false;
};

/// Upper bound on the probability that a sampled code fails certification.
inline FailureBound failure_bound(int q, std::uint64_t k, int n, double eta) {
    if (q < 2 || n < 1 || k < 1) throw std::domain_error("failure_bound: need q >= 2, n >= 1, k >= 1");
    FailureBound fb;
    fb.raw = std::exp(0.5 * std::numbers::ln2_v<double> + std::log(static_cast<double>(k)) -
                      0.5 * eta * n * std::log(static_cast<double>(q)));
    fb.vacuous = !(fb.raw < 1.0);
    fb.value = std::clamp(fb.raw, 0.0, 1.0);
    return fb;
}

}  // namespace apc
