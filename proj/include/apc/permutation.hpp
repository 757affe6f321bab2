#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "apc/errors.hpp"
#include "apc/field.hpp"

namespace apc {

/// A bijection on {0,...,q-1}, stored as its image array. Immutable after
/// construction; validation rejects the first duplicated image value.
class Permutation {
public:
    static Permutation identity(int q) {
        std::vector<Symbol> img(static_cast<std::size_t>(q));
        std::iota(img.begin(), img.end(), Symbol{0});
        return Permutation(std::move(img), unchecked{});
    }

    static Permutation from_images(std::vector<Symbol> images) {
        const std::size_t q = images.size();
        if (q == 0) throw validation_error("Permutation: empty image array");
        if (q > kMaxAlphabet) throw capacity_error("Permutation: alphabet exceeds the 2^16 cap");
        std::vector<bool> seen(q, false);
        for (Symbol v : images) {
            if (v >= q) throw validation_error("Permutation: image value out of range", v);
            if (seen[v]) throw validation_error("Permutation: duplicate image value", v);
            seen[v] = true;
        }
        return Permutation(std::move(images), unchecked{});
    }

    int q() const { return static_cast<int>(images_.size()); }

    Symbol operator()(Symbol s) const { return images_[s]; }

    const std::vector<Symbol>& images() const { return images_; }

    /// this ∘ inner, i.e. s -> (*this)(inner(s)).
    Permutation compose(const Permutation& inner) const {
        if (inner.q() != q()) throw validation_error("Permutation::compose: alphabet size mismatch", inner.q());
        std::vector<Symbol> img(images_.size());
        for (std::size_t s = 0; s < img.size(); ++s) img[s] = images_[inner.images_[s]];
        return Permutation(std::move(img), unchecked{});
    }

    Permutation inverse() const {
        std::vector<Symbol> img(images_.size());
        for (std::size_t s = 0; s < img.size(); ++s) img[images_[s]] = static_cast<Symbol>(s);
        return Permutation(std::move(img), unchecked{});
    }

    bool is_identity() const {
        for (std::size_t s = 0; s < images_.size(); ++s)
            if (images_[s] != s) return false;
        return true;
    }

    friend bool operator==(const Permutation& lhs, const Permutation& rhs) = default;
    friend auto operator<=>(const Permutation& lhs, const Permutation& rhs) { return lhs.images_ <=> rhs.images_; }

private:
    struct unchecked {};
    Permutation(std::vector<Symbol> images, unchecked) : images_(std::move(images)) {}

    std::vector<Symbol> images_;
};

inline Symbol perm_apply(const Permutation& pi, Symbol s) { return pi(s); }
inline Permutation perm_compose(const Permutation& pi, const Permutation& sigma) { return pi.compose(sigma); }
inline Permutation perm_inverse(const Permutation& pi) { return pi.inverse(); }

}  // namespace apc
