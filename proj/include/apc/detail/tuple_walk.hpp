#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "apc/apcode.hpp"
#include "apc/field.hpp"
#include "apc/numeric.hpp"

namespace apc::detail {

/// Depth-first walk over a product space of per-coordinate candidate subsets,
/// visiting tuples in lexicographic candidate-index order. Per-word mismatch
/// counters are maintained incrementally, so each leaf sees the number of
/// codewords the current tuple covers at O(1) cost.
class TupleWalk {
public:
    TupleWalk(const CodeMultiset& code, int thresh, std::vector<std::vector<std::vector<Symbol>>> candidates)
        : code_(&code), thresh_(thresh), candidates_(std::move(candidates)) {
        const int n = code.n();
        const std::uint64_t words = code.size();
        columns_.resize(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) {
            columns_[d].resize(words);
            for (std::uint64_t w = 0; w < words; ++w) columns_[d][w] = code.word(w)[d];
        }
        member_.resize(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) {
            member_[d].resize(candidates_[d].size());
            for (std::size_t c = 0; c < candidates_[d].size(); ++c) {
                member_[d][c].assign(static_cast<std::size_t>(code.q()), 0);
                for (const Symbol s : candidates_[d][c]) member_[d][c][s] = 1;
            }
        }
    }

    std::uint64_t leaves() const {
        std::uint64_t total = 1;
        for (const auto& c : candidates_)
            total = mul_saturating(total, c.size(), std::numeric_limits<std::uint64_t>::max());
        return total;
    }

    const std::vector<std::vector<std::vector<Symbol>>>& candidates() const { return candidates_; }

    /// Walks the subspace with first-coordinate candidate fixed to
    /// `first_lo..first_hi-1`. Visitor signature: (covered, idx) where idx is
    /// the candidate-index vector of the current tuple.
    template <class Visitor>
    void walk_range(std::size_t first_lo, std::size_t first_hi, Visitor&& visit) const {
        const int n = code_->n();
        const std::uint64_t words = code_->size();
        std::vector<std::uint16_t> mism(words, 0);
        std::uint64_t covered = words;  // zero mismatches everywhere at the root
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);

        auto enter = [&](int d, std::size_t c) {
            const auto& memb = member_[d][c];
            const auto& col = columns_[d];
            for (std::uint64_t w = 0; w < words; ++w) {
                if (!memb[col[w]] && static_cast<int>(++mism[w]) == thresh_ + 1) --covered;
            }
        };
        auto leave = [&](int d, std::size_t c) {
            const auto& memb = member_[d][c];
            const auto& col = columns_[d];
            for (std::uint64_t w = 0; w < words; ++w) {
                if (!memb[col[w]] && static_cast<int>(mism[w]--) == thresh_ + 1) ++covered;
            }
        };

        // iterative DFS; depth d chooses candidates_[d][idx[d]]
        auto descend = [&](auto&& self, int d) -> void {
            if (d == n) {
                visit(covered, idx);
                return;
            }
            const std::size_t lo = (d == 0) ? first_lo : 0;
            const std::size_t hi = (d == 0) ? first_hi : candidates_[d].size();
            for (std::size_t c = lo; c < hi; ++c) {
                idx[d] = c;
                enter(d, c);
                self(self, d + 1);
                leave(d, c);
            }
        };
        descend(descend, 0);
    }

    template <class Visitor>
    void walk(Visitor&& visit) const {
        walk_range(0, candidates_[0].size(), visit);
    }

private:
    const CodeMultiset* code_;
    int thresh_;
    std::vector<std::vector<std::vector<Symbol>>> candidates_;
    std::vector<std::vector<Symbol>> columns_;           // [coord][word]
    std::vector<std::vector<std::vector<char>>> member_; // [coord][cand][symbol]
};

/// All size-ell subsets of {0,...,q-1} in lexicographic order.
inline std::vector<std::vector<Symbol>> all_subsets(int q, int ell) {
    std::vector<std::vector<Symbol>> out;
    std::vector<Symbol> cur(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) cur[i] = static_cast<Symbol>(i);
    for (;;) {
        out.push_back(cur);
        int j = ell - 1;
        while (j >= 0 && cur[j] == q - ell + j) --j;
        if (j < 0) break;
        ++cur[j];
        for (int i = j + 1; i < ell; ++i) cur[i] = static_cast<Symbol>(cur[i - 1] + 1);
    }
    return out;
}

}  // namespace apc::detail
