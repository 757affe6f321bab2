#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "apc/errors.hpp"
#include "apc/field.hpp"
#include "apc/numeric.hpp"
#include "apc/permutation.hpp"
#include "apc/rng.hpp"

namespace apc {

enum class EnsembleKind { additive, affine, fractional_linear, uniform, swap_or_not, table };

enum class TestMode { exact, sampled };

inline constexpr std::uint64_t kSupportEnumerationCap = 100000;   // enumerate_support
inline constexpr std::uint64_t kExactDomainCap = 1000000;         // |Sigma_m| in exact tests
inline constexpr std::uint64_t kSampledDomainCap = 2048;          // |Sigma_m| in sampled tests (dense count matrix)

/// Result of an m-wise independence measurement: the worst total-variation
/// distance to uniform over ordered distinct m-tuples, across all source
/// tuples, together with the source tuple attaining it.
struct IndependenceReport {
    int m = 0;
    double tv_max = 0.0;
    std::vector<Symbol> worst_tuple;
    TestMode mode = TestMode::exact;
    std::uint64_t trials = 0;
    std::uint64_t domain_size = 0;  // q * (q-1) * ... * (q-m+1)
};

namespace detail {

/// Lexicographically first tuple of m distinct symbols.
inline std::vector<Symbol> first_distinct_tuple(int m) {
    std::vector<Symbol> t(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) t[i] = static_cast<Symbol>(i);
    return t;
}

/// Advance to the next distinct tuple in lex order; false when exhausted.
inline bool next_distinct_tuple(std::vector<Symbol>& t, int q) {
    const int m = static_cast<int>(t.size());
    std::vector<bool> used(static_cast<std::size_t>(q), false);
    for (int i = 0; i < m; ++i) used[t[i]] = true;
    for (int j = m - 1; j >= 0; --j) {
        used[t[j]] = false;
        int v = t[j] + 1;
        while (v < q && used[v]) ++v;
        if (v < q) {
            t[j] = static_cast<Symbol>(v);
            used[v] = true;
            for (int i = j + 1; i < m; ++i) {
                int w = 0;
                while (used[w]) ++w;
                t[i] = static_cast<Symbol>(w);
                used[w] = true;
            }
            return true;
        }
    }
    return false;
}

/// Rank of a distinct tuple in the lex enumeration above.
inline std::uint64_t rank_distinct_tuple(const std::vector<Symbol>& y, int q) {
    std::uint64_t r = 0;
    const int m = static_cast<int>(y.size());
    for (int i = 0; i < m; ++i) {
        int smaller_used = 0;
        for (int j = 0; j < i; ++j)
            if (y[j] < y[i]) ++smaller_used;
        r = r * static_cast<std::uint64_t>(q - i) + static_cast<std::uint64_t>(y[i] - smaller_used);
    }
    return r;
}

inline Symbol eval_mobius(const FieldSpec& field, Symbol a, Symbol b, Symbol c, Symbol d, Symbol z, Symbol inf) {
    if (z == inf) {
        if (c == 0) return inf;
        return field.div(a, c);
    }
    const Symbol den = field.add(field.mul(c, z), d);
    if (den == 0) return inf;
    return field.div(field.add(field.mul(a, z), b), den);
}

}  // namespace detail

/// A sampleable distribution over permutations of {0,...,q-1}. Exact families
/// (additive shifts, affine maps, fractional-linear maps, the full symmetric
/// group, explicit tables) expose their support for enumeration; the
/// swap-or-not shuffle is a small-seed family whose independence slack is
/// measured rather than derived.
class Ensemble {
public:
    static Ensemble additive(const FieldSpec& spec) {
        Ensemble e(EnsembleKind::additive, spec.q());
        e.field_ = spec;
        e.claimed_m_ = 1;
        e.claimed_delta_ = 0.0;
        return e;
    }

    static Ensemble affine(const FieldSpec& spec) {
        Ensemble e(EnsembleKind::affine, spec.q());
        e.field_ = spec;
        e.claimed_m_ = 2;
        e.claimed_delta_ = 0.0;
        return e;
    }

    /// Fractional-linear maps acting on the projective line over the field:
    /// the alphabet has field size + 1 symbols, the top value playing the
    /// point at infinity.
    static Ensemble fractional_linear(const FieldSpec& spec) {
        if (spec.q() + 1 > static_cast<int>(kMaxAlphabet))
            throw capacity_error("fractional_linear: alphabet q_field + 1 exceeds the 2^16 cap");
        Ensemble e(EnsembleKind::fractional_linear, spec.q() + 1);
        e.field_ = spec;
        e.claimed_m_ = 3;
        e.claimed_delta_ = 0.0;
        return e;
    }

    static Ensemble uniform(int q) {
        Ensemble e(EnsembleKind::uniform, q);
        e.claimed_m_ = q;
        e.claimed_delta_ = 0.0;
        return e;
    }

    /// family_seed keys the fixed per-pair decision hash; each draw then
    /// consumes rounds fresh (offset, bit) pairs from the caller's generator.
    static Ensemble swap_or_not(int q, int rounds, std::uint64_t family_seed = 0) {
        if (rounds < 1) throw std::invalid_argument("swap_or_not: rounds must be >= 1");
        Ensemble e(EnsembleKind::swap_or_not, q);
        e.rounds_ = rounds;
        e.family_seed_ = family_seed;
        e.claimed_m_ = 0;
        e.claimed_delta_ = 1.0;
        return e;
    }

    static Ensemble table(std::vector<Permutation> perms, std::string source = "") {
        if (perms.empty()) throw validation_error("table ensemble: permutation list is empty");
        const int q = perms.front().q();
        for (const auto& p : perms)
            if (p.q() != q) throw validation_error("table ensemble: mixed alphabet sizes", p.q());
        Ensemble e(EnsembleKind::table, q);
        e.table_ = std::move(perms);
        e.table_source_ = std::move(source);
        e.claimed_m_ = 0;
        e.claimed_delta_ = 1.0;
        return e;
    }

    /// Plain-text table: one permutation per line as q space-separated image
    /// values; lines starting with '#' (and blank lines) are ignored.
    static Ensemble table_from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("table ensemble: cannot open '" + path + "'");
        std::vector<Permutation> perms;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::istringstream ss(line);
            std::vector<Symbol> images;
            long long v;
            while (ss >> v) {
                if (v < 0 || v >= static_cast<long long>(kMaxAlphabet))
                    throw validation_error(path + ":" + std::to_string(lineno) + ": symbol out of range", v);
                images.push_back(static_cast<Symbol>(v));
            }
            try {
                perms.push_back(Permutation::from_images(std::move(images)));
            } catch (const validation_error& err) {
                throw validation_error(path + ":" + std::to_string(lineno) + ": " + err.what(),
                                       err.offending().value_or(-1));
            }
        }
        return table(std::move(perms), path);
    }

    /// Descriptor strings: additive:2^2/1,1,1  affine:5^1  pgl:2^2/1,1,1
    /// uniform:8  swapnot:8:64[:seed]  table:<path>
    static Ensemble parse(const std::string& descriptor) {
        const auto colon = descriptor.find(':');
        if (colon == std::string::npos)
            throw validation_error("ensemble descriptor: expected '<kind>:...' in '" + descriptor + "'");
        const std::string kind = descriptor.substr(0, colon);
        const std::string rest = descriptor.substr(colon + 1);
        if (kind == "additive") return additive(FieldSpec::parse(rest));
        if (kind == "affine") return affine(FieldSpec::parse(rest));
        if (kind == "pgl") return fractional_linear(FieldSpec::parse(rest));
        if (kind == "uniform") return uniform(parse_int(rest, "uniform alphabet size"));
        if (kind == "table") return table_from_file(rest);
        if (kind == "swapnot") {
            std::vector<std::string> parts;
            std::stringstream ss(rest);
            std::string item;
            while (std::getline(ss, item, ':')) parts.push_back(item);
            if (parts.size() < 2 || parts.size() > 3)
                throw validation_error("swapnot descriptor: expected swapnot:<q>:<rounds>[:<seed>]");
            const int q = parse_int(parts[0], "swapnot alphabet size");
            const int rounds = parse_int(parts[1], "swapnot rounds");
            std::uint64_t seed = 0;
            if (parts.size() == 3) seed = std::stoull(parts[2]);
            return swap_or_not(q, rounds, seed);
        }
        throw validation_error("ensemble descriptor: unknown kind '" + kind + "'");
    }

    std::string descriptor() const {
        switch (kind_) {
            case EnsembleKind::additive: return "additive:" + field_->to_string();
            case EnsembleKind::affine: return "affine:" + field_->to_string();
            case EnsembleKind::fractional_linear: return "pgl:" + field_->to_string();
            case EnsembleKind::uniform: return "uniform:" + std::to_string(q_);
            case EnsembleKind::swap_or_not:
                return "swapnot:" + std::to_string(q_) + ":" + std::to_string(rounds_) +
                       (family_seed_ ? ":" + std::to_string(family_seed_) : "");
            case EnsembleKind::table:
                return "table:" + (table_source_.empty() ? "<inline>" : table_source_);
        }
        return "?";
    }

    EnsembleKind kind() const { return kind_; }
    int q() const { return q_; }
    int rounds() const { return rounds_; }
    const FieldSpec& field() const { return *field_; }
    int claimed_m() const { return claimed_m_; }
    double claimed_delta() const { return claimed_delta_; }

    /// For the swap-or-not family the independence order/slack are measured,
    /// not derived; the caller records them here.
    void set_claimed(int m, double delta) {
        claimed_m_ = m;
        claimed_delta_ = delta;
    }

    Permutation sample(Rng& rng) const {
        switch (kind_) {
            case EnsembleKind::additive: {
                const Symbol a = static_cast<Symbol>(next_below(rng, static_cast<std::uint64_t>(q_)));
                return shift_perm(a);
            }
            case EnsembleKind::affine: {
                const Symbol a = static_cast<Symbol>(1 + next_below(rng, static_cast<std::uint64_t>(q_ - 1)));
                const Symbol b = static_cast<Symbol>(next_below(rng, static_cast<std::uint64_t>(q_)));
                return affine_perm(a, b);
            }
            case EnsembleKind::fractional_linear: {
                const int qf = field_->q();
                for (;;) {
                    const Symbol a = static_cast<Symbol>(next_below(rng, static_cast<std::uint64_t>(qf)));
                    const Symbol b = static_cast<Symbol>(next_below(rng, static_cast<std::uint64_t>(qf)));
                    const Symbol c = static_cast<Symbol>(next_below(rng, static_cast<std::uint64_t>(qf)));
                    const Symbol d = static_cast<Symbol>(next_below(rng, static_cast<std::uint64_t>(qf)));
                    if (field_->sub(field_->mul(a, d), field_->mul(b, c)) == 0) continue;
                    return mobius_perm(a, b, c, d);
                }
            }
            case EnsembleKind::uniform: {
                std::vector<Symbol> img(static_cast<std::size_t>(q_));
                for (int i = 0; i < q_; ++i) img[i] = static_cast<Symbol>(i);
                for (int i = q_ - 1; i > 0; --i) {
                    const auto j = next_below(rng, static_cast<std::uint64_t>(i) + 1);
                    std::swap(img[i], img[j]);
                }
                return Permutation::from_images(std::move(img));
            }
            case EnsembleKind::swap_or_not: {
                std::vector<Symbol> img(static_cast<std::size_t>(q_));
                for (int i = 0; i < q_; ++i) img[i] = static_cast<Symbol>(i);
                for (int r = 0; r < rounds_; ++r) {
                    const Symbol offset = static_cast<Symbol>(next_below(rng, static_cast<std::uint64_t>(q_)));
                    const int bit = static_cast<int>(next_below(rng, 2));
                    apply_swap_round(img, r, offset, bit);
                }
                return Permutation::from_images(std::move(img));
            }
            case EnsembleKind::table:
                return table_[next_below(rng, table_.size())];
        }
        throw std::logic_error("Ensemble::sample: unreachable");
    }

    bool support_enumerable() const { return support_size() <= kSupportEnumerationCap; }

    /// Number of enumeration atoms, saturating at 2^63. For swap-or-not this
    /// counts seed combinations (distinct permutations may coincide).
    std::uint64_t support_size() const {
        constexpr std::uint64_t sat = std::uint64_t{1} << 63;
        const auto uq = static_cast<std::uint64_t>(q_);
        switch (kind_) {
            case EnsembleKind::additive: return uq;
            case EnsembleKind::affine: return uq * (uq - 1);
            case EnsembleKind::fractional_linear: {
                const auto f = static_cast<std::uint64_t>(field_->q());
                return f * (f * f - 1);
            }
            case EnsembleKind::uniform: return falling_factorial_saturating(uq, uq, sat);
            case EnsembleKind::swap_or_not: {
                std::uint64_t acc = 1;
                for (int r = 0; r < rounds_; ++r) acc = mul_saturating(acc, 2 * uq, sat);
                return acc;
            }
            case EnsembleKind::table: return table_.size();
        }
        return 0;
    }

    /// Support as (permutation, probability) pairs, duplicates aggregated.
    /// Deterministic order; probabilities sum to 1.
    std::vector<std::pair<Permutation, double>> enumerate_support() const {
        const std::uint64_t atoms = support_size();
        if (atoms > kSupportEnumerationCap)
            throw capacity_error("enumerate_support: support size " + std::to_string(atoms) + " exceeds the cap of " +
                                 std::to_string(kSupportEnumerationCap));
        std::vector<std::pair<Permutation, double>> out;
        switch (kind_) {
            case EnsembleKind::additive: {
                for (int a = 0; a < q_; ++a) out.emplace_back(shift_perm(static_cast<Symbol>(a)), 1.0 / q_);
                return out;
            }
            case EnsembleKind::affine: {
                const double w = 1.0 / static_cast<double>(atoms);
                for (int a = 1; a < q_; ++a)
                    for (int b = 0; b < q_; ++b)
                        out.emplace_back(affine_perm(static_cast<Symbol>(a), static_cast<Symbol>(b)), w);
                return out;
            }
            case EnsembleKind::fractional_linear: {
                // canonical matrices: first nonzero coefficient scaled to 1
                const int qf = field_->q();
                const double w = 1.0 / static_cast<double>(atoms);
                for (int b = 0; b < qf; ++b)
                    for (int c = 0; c < qf; ++c)
                        for (int d = 0; d < qf; ++d) {
                            // a = 1: invertible iff d != b*c
                            if (static_cast<Symbol>(d) != field_->mul(static_cast<Symbol>(b), static_cast<Symbol>(c)))
                                out.emplace_back(mobius_perm(1, static_cast<Symbol>(b), static_cast<Symbol>(c),
                                                             static_cast<Symbol>(d)),
                                                 w);
                        }
                for (int c = 1; c < qf; ++c)
                    for (int d = 0; d < qf; ++d)
                        out.emplace_back(mobius_perm(0, 1, static_cast<Symbol>(c), static_cast<Symbol>(d)), w);
                return out;
            }
            case EnsembleKind::uniform: {
                std::vector<Symbol> img(static_cast<std::size_t>(q_));
                for (int i = 0; i < q_; ++i) img[i] = static_cast<Symbol>(i);
                const double w = 1.0 / static_cast<double>(atoms);
                do {
                    out.emplace_back(Permutation::from_images(img), w);
                } while (std::next_permutation(img.begin(), img.end()));
                return out;
            }
            case EnsembleKind::swap_or_not: {
                // every per-round (offset, bit) combination, aggregated
                std::map<std::vector<Symbol>, double> agg;
                const double w = 1.0 / static_cast<double>(atoms);
                std::vector<int> atom(static_cast<std::size_t>(rounds_), 0);
                const int per_round = 2 * q_;
                for (;;) {
                    std::vector<Symbol> img(static_cast<std::size_t>(q_));
                    for (int i = 0; i < q_; ++i) img[i] = static_cast<Symbol>(i);
                    for (int r = 0; r < rounds_; ++r)
                        apply_swap_round(img, r, static_cast<Symbol>(atom[r] / 2), atom[r] % 2);
                    agg[img] += w;
                    int pos = rounds_ - 1;
                    while (pos >= 0 && atom[pos] == per_round - 1) atom[pos--] = 0;
                    if (pos < 0) break;
                    ++atom[pos];
                }
                for (auto& [img, prob] : agg) out.emplace_back(Permutation::from_images(img), prob);
                return out;
            }
            case EnsembleKind::table: {
                std::map<std::vector<Symbol>, double> agg;
                for (const auto& p : table_) agg[p.images()] += 1.0 / static_cast<double>(table_.size());
                for (auto& [img, prob] : agg) out.emplace_back(Permutation::from_images(img), prob);
                return out;
            }
        }
        return out;
    }

    /// Fresh random bits needed to draw a full k x n matrix of permutations.
    std::uint64_t random_bits_cost(int k, int n) const {
        if (k < 1 || n < 1) throw std::invalid_argument("random_bits_cost: k and n must be >= 1");
        std::uint64_t per_draw = 0;
        switch (kind_) {
            case EnsembleKind::uniform:
                per_draw = static_cast<std::uint64_t>(std::ceil(log2_factorial(static_cast<std::uint64_t>(q_))));
                break;
            case EnsembleKind::swap_or_not:
                per_draw = static_cast<std::uint64_t>(rounds_) *
                           (static_cast<std::uint64_t>(ceil_log2_u64(static_cast<std::uint64_t>(q_))) + 1);
                break;
            default:
                per_draw = static_cast<std::uint64_t>(ceil_log2_u64(support_size()));
                break;
        }
        return static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(n) * per_draw;
    }

    /// Worst-case TV distance to uniform of image m-tuples, over all source
    /// m-tuples. Exact mode enumerates the support; sampled mode reports the
    /// plug-in estimate from `trials` draws.
    IndependenceReport test_independence(int m, TestMode mode, std::uint64_t trials = 0, Rng* rng = nullptr) const {
        if (m < 1 || m > q_) throw std::domain_error("test_independence: need 1 <= m <= q");
        const std::uint64_t domain =
            falling_factorial_saturating(static_cast<std::uint64_t>(q_), static_cast<std::uint64_t>(m),
                                         std::uint64_t{1} << 62);
        IndependenceReport report;
        report.m = m;
        report.mode = mode;
        report.domain_size = domain;
        if (mode == TestMode::exact) {
            if (domain > kExactDomainCap)
                throw capacity_error("test_independence: |Sigma_m| = " + std::to_string(domain) +
                                     " exceeds the exact-mode cap of " + std::to_string(kExactDomainCap));
            const auto support = enumerate_support();
            const double u = 1.0 / static_cast<double>(domain);
            std::vector<double> dist(static_cast<std::size_t>(domain), 0.0);
            std::vector<std::uint64_t> touched;
            std::vector<Symbol> source = detail::first_distinct_tuple(m);
            std::vector<Symbol> image(static_cast<std::size_t>(m));
            bool first = true;
            do {
                touched.clear();
                for (const auto& [pi, w] : support) {
                    for (int i = 0; i < m; ++i) image[i] = pi(source[i]);
                    const std::uint64_t r = detail::rank_distinct_tuple(image, q_);
                    if (dist[r] == 0.0) touched.push_back(r);
                    dist[r] += w;
                }
                double tv = 0.0;
                for (const std::uint64_t r : touched) tv += std::abs(dist[r] - u);
                tv += static_cast<double>(domain - touched.size()) * u;
                tv *= 0.5;
                if (first || tv > report.tv_max) {
                    report.tv_max = tv;
                    report.worst_tuple = source;
                    first = false;
                }
                for (const std::uint64_t r : touched) dist[r] = 0.0;
            } while (detail::next_distinct_tuple(source, q_));
            return report;
        }
        // sampled
        if (trials < 1) throw std::invalid_argument("test_independence: sampled mode needs trials >= 1");
        if (rng == nullptr) throw std::invalid_argument("test_independence: sampled mode needs a generator");
        if (domain > kSampledDomainCap)
            throw capacity_error("test_independence: |Sigma_m| = " + std::to_string(domain) +
                                 " exceeds the sampled-mode cap of " + std::to_string(kSampledDomainCap));
        report.trials = trials;
        std::vector<std::vector<Symbol>> sources;
        {
            std::vector<Symbol> s = detail::first_distinct_tuple(m);
            do {
                sources.push_back(s);
            } while (detail::next_distinct_tuple(s, q_));
        }
        std::vector<std::vector<std::uint32_t>> counts(sources.size(),
                                                       std::vector<std::uint32_t>(static_cast<std::size_t>(domain), 0));
        std::vector<Symbol> image(static_cast<std::size_t>(m));
        for (std::uint64_t t = 0; t < trials; ++t) {
            const Permutation pi = sample(*rng);
            for (std::size_t s = 0; s < sources.size(); ++s) {
                for (int i = 0; i < m; ++i) image[i] = pi(sources[s][i]);
                ++counts[s][detail::rank_distinct_tuple(image, q_)];
            }
        }
        const double u = 1.0 / static_cast<double>(domain);
        bool first = true;
        for (std::size_t s = 0; s < sources.size(); ++s) {
            double tv = 0.0;
            for (const std::uint32_t c : counts[s])
                tv += std::abs(static_cast<double>(c) / static_cast<double>(trials) - u);
            tv *= 0.5;
            if (first || tv > report.tv_max) {
                report.tv_max = tv;
                report.worst_tuple = sources[s];
                first = false;
            }
        }
        return report;
    }

private:
    Ensemble(EnsembleKind kind, int q) : kind_(kind), q_(q) {
        if (q_ < 2) throw validation_error("ensemble: alphabet size must be >= 2", q_);
        if (q_ > static_cast<int>(kMaxAlphabet)) throw capacity_error("ensemble: alphabet exceeds the 2^16 cap");
    }

    static int parse_int(const std::string& s, const std::string& what) {
        try {
            std::size_t pos = 0;
            const int v = std::stoi(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw validation_error("cannot parse " + what + " from '" + s + "'");
        }
    }

    Permutation shift_perm(Symbol a) const {
        std::vector<Symbol> img(static_cast<std::size_t>(q_));
        for (int z = 0; z < q_; ++z) img[z] = field_->add(static_cast<Symbol>(z), a);
        return Permutation::from_images(std::move(img));
    }

    Permutation affine_perm(Symbol a, Symbol b) const {
        std::vector<Symbol> img(static_cast<std::size_t>(q_));
        for (int z = 0; z < q_; ++z) img[z] = field_->add(field_->mul(a, static_cast<Symbol>(z)), b);
        return Permutation::from_images(std::move(img));
    }

    Permutation mobius_perm(Symbol a, Symbol b, Symbol c, Symbol d) const {
        const Symbol inf = static_cast<Symbol>(field_->q());
        std::vector<Symbol> img(static_cast<std::size_t>(q_));
        for (int z = 0; z < q_; ++z)
            img[z] = detail::eval_mobius(*field_, a, b, c, d, static_cast<Symbol>(z), inf);
        return Permutation::from_images(std::move(img));
    }

    /// One swap-or-not round: x pairs with (offset - x) mod q; the pair swaps
    /// when the fresh bit xor the keyed hash of the pair representative says
    /// so. Each round is an involution.
    void apply_swap_round(std::vector<Symbol>& img, int round, Symbol offset, int bit) const {
        const auto q = static_cast<std::uint32_t>(q_);
        for (auto& v : img) {
            const std::uint32_t x = v;
            const std::uint32_t partner = (static_cast<std::uint32_t>(offset) + q - x) % q;
            const std::uint32_t rep = x > partner ? x : partner;
            const std::uint64_t h = splitmix64(family_seed_ ^ splitmix64((static_cast<std::uint64_t>(round) << 40) ^
                                                                         (static_cast<std::uint64_t>(offset) << 20) ^
                                                                         rep));
            if (((h ^ static_cast<std::uint64_t>(bit)) & 1u) != 0) v = static_cast<Symbol>(partner);
        }
    }

    EnsembleKind kind_;
    int q_;
    std::optional<FieldSpec> field_;
    int rounds_ = 0;
    std::uint64_t family_seed_ = 0;
    std::vector<Permutation> table_;
    std::string table_source_;
    int claimed_m_ = 0;
    double claimed_delta_ = 1.0;
};

inline Permutation sample(const Ensemble& e, Rng& rng) { return e.sample(rng); }

inline std::uint64_t random_bits_cost(const Ensemble& e, int k, int n) { return e.random_bits_cost(k, n); }

}  // namespace apc
