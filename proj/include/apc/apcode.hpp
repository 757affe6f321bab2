#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "apc/ensemble.hpp"
#include "apc/errors.hpp"
#include "apc/field.hpp"
#include "apc/permutation.hpp"
#include "apc/rng.hpp"

namespace apc {

using Codeword = std::vector<Symbol>;
using Message = std::vector<std::uint8_t>;  // bits; index 0 is the first-applied row

inline constexpr int kMaxMessageBits = 24;  // build_code materializes 2^k words

/// k x n matrix of permutations over a common alphabet; row i is applied (or
/// skipped) according to message bit i.
class PermMatrix {
public:
    static PermMatrix from_entries(int k, int n, std::vector<Permutation> entries) {
        if (k < 1 || n < 1) throw validation_error("PermMatrix: need k >= 1 and n >= 1");
        if (entries.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(n))
            throw validation_error("PermMatrix: expected k*n entries", static_cast<long long>(entries.size()));
        const int q = entries.front().q();
        for (const auto& p : entries)
            if (p.q() != q) throw validation_error("PermMatrix: mixed alphabet sizes", p.q());
        return PermMatrix(k, n, q, std::move(entries));
    }

    int k() const { return k_; }
    int n() const { return n_; }
    int q() const { return q_; }

    /// row in [0, k), col in [0, n)
    const Permutation& at(int row, int col) const {
        return entries_[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(col)];
    }

    /// Header "q k n", then k*n image arrays (one per line), row-major.
    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw io_error("PermMatrix::save: cannot open '" + path + "'");
        out << q_ << " " << k_ << " " << n_ << "\n";
        for (const auto& p : entries_) {
            const auto& img = p.images();
            for (std::size_t i = 0; i < img.size(); ++i) out << (i ? " " : "") << img[i];
            out << "\n";
        }
        if (!out) throw io_error("PermMatrix::save: write failed for '" + path + "'");
    }

    static PermMatrix load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("PermMatrix::load: cannot open '" + path + "'");
        int q = 0, k = 0, n = 0;
        if (!(in >> q >> k >> n)) throw io_error("PermMatrix::load: bad header in '" + path + "'");
        std::vector<Permutation> entries;
        entries.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(n));
        for (long long e = 0; e < static_cast<long long>(k) * n; ++e) {
            std::vector<Symbol> img(static_cast<std::size_t>(q));
            for (int i = 0; i < q; ++i) {
                long long v;
                if (!(in >> v)) throw io_error("PermMatrix::load: truncated entry in '" + path + "'");
                img[i] = static_cast<Symbol>(v);
            }
            entries.push_back(Permutation::from_images(std::move(img)));
        }
        return from_entries(k, n, std::move(entries));
    }

private:
    PermMatrix(int k, int n, int q, std::vector<Permutation> entries)
        : k_(k), n_(n), q_(q), entries_(std::move(entries)) {}

    int k_, n_, q_;
    std::vector<Permutation> entries_;
};

/// The 2^k codewords of an AP code, indexed by message value (bit i of the
/// index is message bit i). Stored as a multiset: repeated words keep their
/// multiplicity, so intersection counts follow preimage semantics.
class CodeMultiset {
public:
    static CodeMultiset from_flat(int q, int n, int k, std::vector<Symbol> flat) {
        if (q < 2) throw validation_error("CodeMultiset: alphabet size must be >= 2", q);
        if (n < 1 || k < 0) throw validation_error("CodeMultiset: need n >= 1 and k >= 0");
        if (k > kMaxMessageBits)
            throw capacity_error("CodeMultiset: k = " + std::to_string(k) + " exceeds the 2^" +
                                 std::to_string(kMaxMessageBits) + "-word cap");
        const std::uint64_t words = std::uint64_t{1} << k;
        if (flat.size() != words * static_cast<std::uint64_t>(n))
            throw validation_error("CodeMultiset: expected 2^k * n symbols", static_cast<long long>(flat.size()));
        for (const Symbol s : flat)
            if (s >= q) throw validation_error("CodeMultiset: symbol out of range", s);
        return CodeMultiset(q, n, k, std::move(flat));
    }

    static CodeMultiset from_words(int q, int n, int k, const std::vector<Codeword>& words) {
        std::vector<Symbol> flat;
        flat.reserve(words.size() * static_cast<std::size_t>(n));
        for (const auto& w : words) {
            if (static_cast<int>(w.size()) != n)
                throw validation_error("CodeMultiset: codeword length mismatch", static_cast<long long>(w.size()));
            flat.insert(flat.end(), w.begin(), w.end());
        }
        return from_flat(q, n, k, std::move(flat));
    }

    int q() const { return q_; }
    int n() const { return n_; }
    int k() const { return k_; }
    std::uint64_t size() const { return std::uint64_t{1} << k_; }

    std::span<const Symbol> word(std::uint64_t index) const {
        return {flat_.data() + index * static_cast<std::uint64_t>(n_), static_cast<std::size_t>(n_)};
    }

    const std::vector<Symbol>& flat() const { return flat_; }

    /// Words in sorted order (multiset canonical form).
    std::vector<Codeword> sorted_words() const {
        std::vector<Codeword> ws;
        ws.reserve(size());
        for (std::uint64_t m = 0; m < size(); ++m) {
            const auto w = word(m);
            ws.emplace_back(w.begin(), w.end());
        }
        std::sort(ws.begin(), ws.end());
        return ws;
    }

    /// Header "q n k", then one codeword per line in message order.
    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw io_error("CodeMultiset::save: cannot open '" + path + "'");
        out << q_ << " " << n_ << " " << k_ << "\n";
        for (std::uint64_t m = 0; m < size(); ++m) {
            const auto w = word(m);
            for (int j = 0; j < n_; ++j) out << (j ? " " : "") << w[j];
            out << "\n";
        }
        if (!out) throw io_error("CodeMultiset::save: write failed for '" + path + "'");
    }

    static CodeMultiset load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("CodeMultiset::load: cannot open '" + path + "'");
        int q = 0, n = 0, k = 0;
        if (!(in >> q >> n >> k)) throw io_error("CodeMultiset::load: bad header in '" + path + "'");
        if (k < 0 || k > kMaxMessageBits) throw io_error("CodeMultiset::load: bad k in '" + path + "'");
        const std::uint64_t words = std::uint64_t{1} << k;
        std::vector<Symbol> flat(words * static_cast<std::uint64_t>(n));
        for (auto& s : flat) {
            long long v;
            if (!(in >> v)) throw io_error("CodeMultiset::load: truncated codeword in '" + path + "'");
            s = static_cast<Symbol>(v);
        }
        return from_flat(q, n, k, std::move(flat));
    }

    friend bool operator==(const CodeMultiset& lhs, const CodeMultiset& rhs) = default;

private:
    CodeMultiset(int q, int n, int k, std::vector<Symbol> flat) : q_(q), n_(n), k_(k), flat_(std::move(flat)) {}

    int q_, n_, k_;
    std::vector<Symbol> flat_;
};

inline bool multiset_equal(const CodeMultiset& lhs, const CodeMultiset& rhs) {
    return lhs.q() == rhs.q() && lhs.n() == rhs.n() && lhs.sorted_words() == rhs.sorted_words();
}

/// Apply rows with set message bits, in row order, starting from all-zeros.
inline Codeword encode(const PermMatrix& mat, const Message& z) {
    if (static_cast<int>(z.size()) != mat.k())
        throw std::domain_error("encode: message length " + std::to_string(z.size()) + " != k = " +
                                std::to_string(mat.k()));
    Codeword y(static_cast<std::size_t>(mat.n()), 0);
    for (int i = 0; i < mat.k(); ++i) {
        if (!z[i]) continue;
        for (int j = 0; j < mat.n(); ++j) y[j] = mat.at(i, j)(y[j]);
    }
    return y;
}

/// Little-endian bits of `value`.
inline Message message_bits(std::uint64_t value, int k) {
    Message z(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) z[i] = static_cast<std::uint8_t>((value >> i) & 1u);
    return z;
}

/// All 2^k codewords in message order, built by doubling: the block of words
/// with bit i set is row i applied to the block without it.
inline CodeMultiset build_code(const PermMatrix& mat) {
    if (mat.k() > kMaxMessageBits)
        throw capacity_error("build_code: k = " + std::to_string(mat.k()) + " exceeds the 2^" +
                             std::to_string(kMaxMessageBits) + "-word cap");
    const int n = mat.n();
    const std::uint64_t words = std::uint64_t{1} << mat.k();
    std::vector<Symbol> flat(words * static_cast<std::uint64_t>(n), 0);
    for (int i = 0; i < mat.k(); ++i) {
        const std::uint64_t half = std::uint64_t{1} << i;
        for (std::uint64_t m = 0; m < half; ++m) {
            const Symbol* src = flat.data() + m * n;
            Symbol* dst = flat.data() + (half + m) * n;
            for (int j = 0; j < n; ++j) dst[j] = mat.at(i, j)(src[j]);
        }
    }
    return CodeMultiset::from_flat(mat.q(), n, mat.k(), std::move(flat));
}

/// The doubling sequence C_0, ..., C_k; C_i holds the 2^i words reachable
/// using only the first i rows, and C_k is build_code(mat).
inline std::vector<CodeMultiset> generating_sequence(const PermMatrix& mat) {
    const CodeMultiset full = build_code(mat);
    std::vector<CodeMultiset> seq;
    seq.reserve(static_cast<std::size_t>(mat.k()) + 1);
    // C_0 is the singleton all-zeros word; CodeMultiset indexes by message
    // bits, so C_i is just the prefix of the final flat array.
    for (int i = 0; i <= mat.k(); ++i) {
        const std::uint64_t words = std::uint64_t{1} << i;
        std::vector<Symbol> flat(full.flat().begin(),
                                 full.flat().begin() + static_cast<std::ptrdiff_t>(words * mat.n()));
        seq.push_back(CodeMultiset::from_flat(mat.q(), mat.n(), i, std::move(flat)));
    }
    return seq;
}

/// k*n independent draws in row-major order.
inline PermMatrix sample_matrix(const Ensemble& e, int k, int n, Rng& rng) {
    if (k < 1 || n < 1) throw validation_error("sample_matrix: need k >= 1 and n >= 1");
    std::vector<Permutation> entries;
    entries.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(n));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) entries.push_back(e.sample(rng));
    return PermMatrix::from_entries(k, n, std::move(entries));
}

/// Matrix of additive shifts: entry (i,j) maps z to z + G[i][j]. The code it
/// builds is the additive span {xG : x in {0,1}^k} as a multiset.
inline PermMatrix additive_matrix(const std::vector<Symbol>& g_flat, int k, int n, const FieldSpec& spec) {
    if (g_flat.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(n))
        throw validation_error("additive_matrix: expected k*n shift amounts", static_cast<long long>(g_flat.size()));
    std::vector<Permutation> entries;
    entries.reserve(g_flat.size());
    for (const Symbol g : g_flat) {
        std::vector<Symbol> img(static_cast<std::size_t>(spec.q()));
        for (int z = 0; z < spec.q(); ++z) img[z] = spec.add(static_cast<Symbol>(z), g);
        entries.push_back(Permutation::from_images(std::move(img)));
    }
    return PermMatrix::from_entries(k, n, std::move(entries));
}

}  // namespace apc
