#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "apc/errors.hpp"

namespace apc {

using Symbol = std::uint16_t;

/// Image-table permutations stay cache friendly up to this alphabet size.
inline constexpr std::uint32_t kMaxAlphabet = 1u << 16;

/// GF(p^t) in polynomial basis. An element is an integer in [0, q): its
/// base-p digits are the polynomial coefficients, lowest degree first. The
/// modulus is a monic irreducible of degree t over GF(p), stored the same
/// way (constant term first) and validated at construction.
///
/// Text form used by CLI flags and config files: "p^t/c0,c1,...,ct",
/// e.g. "2^2/1,1,1" for GF(4) with modulus 1 + x + x^2. Prime fields may
/// omit the modulus: "5^1".
class FieldSpec {
public:
    FieldSpec(int p, int t, std::vector<int> modulus = {}) : p_(p), t_(t), modulus_(std::move(modulus)) {
        if (p_ < 2 || !is_prime(p_)) throw validation_error("FieldSpec: characteristic must be prime, got " + std::to_string(p_));
        if (t_ < 1) throw validation_error("FieldSpec: extension degree must be >= 1");
        std::uint64_t q = 1;
        for (int i = 0; i < t_; ++i) {
            q *= static_cast<std::uint64_t>(p_);
            if (q > kMaxAlphabet) throw capacity_error("FieldSpec: q = p^t exceeds the 2^16 alphabet cap");
        }
        q_ = static_cast<std::uint32_t>(q);
        if (t_ == 1) {
            if (!modulus_.empty()) throw validation_error("FieldSpec: prime fields take no modulus");
        } else {
            if (modulus_.empty()) modulus_ = default_modulus(p_, t_);
            validate_modulus();
            if (p_ == 2) {
                mod_bits_ = 0;
                for (int i = 0; i <= t_; ++i)
                    if (modulus_[i]) mod_bits_ |= (1u << i);
            }
        }
    }

    static FieldSpec parse(const std::string& text) {
        const auto caret = text.find('^');
        if (caret == std::string::npos) throw validation_error("FieldSpec: expected \"p^t\" in '" + text + "'");
        const auto slash = text.find('/', caret);
        int p = 0, t = 0;
        try {
            p = std::stoi(text.substr(0, caret));
            t = std::stoi(text.substr(caret + 1, slash == std::string::npos ? std::string::npos : slash - caret - 1));
        } catch (const std::exception&) {
            throw validation_error("FieldSpec: cannot parse '" + text + "'");
        }
        std::vector<int> coeffs;
        if (slash != std::string::npos) {
            std::stringstream ss(text.substr(slash + 1));
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    coeffs.push_back(std::stoi(item));
                } catch (const std::exception&) {
                    throw validation_error("FieldSpec: bad modulus coefficient '" + item + "'");
                }
            }
        }
        return FieldSpec(p, t, std::move(coeffs));
    }

    std::string to_string() const {
        std::string out = std::to_string(p_) + "^" + std::to_string(t_);
        if (t_ > 1) {
            out += "/";
            for (std::size_t i = 0; i < modulus_.size(); ++i) {
                if (i) out += ",";
                out += std::to_string(modulus_[i]);
            }
        }
        return out;
    }

    int p() const { return p_; }
    int t() const { return t_; }
    int q() const { return static_cast<int>(q_); }
    const std::vector<int>& modulus() const { return modulus_; }

    Symbol add(Symbol a, Symbol b) const {
        check_range(a);
        check_range(b);
        if (p_ == 2) return static_cast<Symbol>(a ^ b);
        if (t_ == 1) return static_cast<Symbol>((static_cast<std::uint32_t>(a) + b) % p_);
        return digitwise(a, b, /*subtract=*/false);
    }

    Symbol sub(Symbol a, Symbol b) const {
        check_range(a);
        check_range(b);
        if (p_ == 2) return static_cast<Symbol>(a ^ b);
        if (t_ == 1) return static_cast<Symbol>((static_cast<std::uint32_t>(a) + p_ - b) % p_);
        return digitwise(a, b, /*subtract=*/true);
    }

    Symbol neg(Symbol a) const { return sub(0, a); }

    Symbol mul(Symbol a, Symbol b) const {
        check_range(a);
        check_range(b);
        if (t_ == 1) return static_cast<Symbol>((static_cast<std::uint64_t>(a) * b) % p_);
        if (p_ == 2) {
            // carry-less multiply with on-the-fly reduction by the modulus bits
            std::uint32_t x = a, y = b, acc = 0;
            const std::uint32_t top = 1u << t_;
            while (y != 0) {
                if (y & 1u) acc ^= x;
                y >>= 1;
                x <<= 1;
                if (x & top) x ^= mod_bits_;
            }
            return static_cast<Symbol>(acc);
        }
        // schoolbook convolution of base-p digit vectors, reduced by the monic modulus
        std::vector<int> da = digits(a), db = digits(b);
        std::vector<int> prod(2 * t_ - 1, 0);
        for (int i = 0; i < t_; ++i)
            for (int j = 0; j < t_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        for (int d = 2 * t_ - 2; d >= t_; --d) {
            const int c = prod[d];
            if (c == 0) continue;
            for (int i = 0; i <= t_; ++i) {
                int& slot = prod[d - t_ + i];
                slot = ((slot - c * modulus_[i]) % p_ + p_) % p_;
            }
        }
        prod.resize(t_);
        return pack(prod);
    }

    Symbol pow(Symbol a, std::uint64_t e) const {
        Symbol result = 1;
        Symbol base = a;
        while (e != 0) {
            if (e & 1u) result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }

    /// Multiplicative inverse, via a^(q-2). Zero has none.
    Symbol inv(Symbol a) const {
        check_range(a);
        if (a == 0) throw std::domain_error("FieldSpec::inv: zero is not invertible");
        return pow(a, q_ - 2);
    }

    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

    friend bool operator==(const FieldSpec& lhs, const FieldSpec& rhs) {
        return lhs.p_ == rhs.p_ && lhs.t_ == rhs.t_ && lhs.modulus_ == rhs.modulus_;
    }

private:
    static bool is_prime(int p) {
        if (p < 2) return false;
        for (int d = 2; d * d <= p; ++d)
            if (p % d == 0) return false;
        return true;
    }

    static std::vector<int> default_modulus(int p, int t) {
        if (p == 2) {
            switch (t) {
                case 2: return {1, 1, 1};           // 1 + x + x^2
                case 3: return {1, 1, 0, 1};        // 1 + x + x^3
                case 4: return {1, 1, 0, 0, 1};     // 1 + x + x^4
                case 5: return {1, 0, 1, 0, 0, 1};  // 1 + x^2 + x^5
                default: break;
            }
        }
        throw validation_error("FieldSpec: no default modulus for GF(" + std::to_string(p) + "^" + std::to_string(t) +
                               "); supply one explicitly");
    }

    void check_range(Symbol a) const {
        if (static_cast<std::uint32_t>(a) >= q_)
            throw std::domain_error("FieldSpec: symbol " + std::to_string(a) + " out of range for q=" + std::to_string(q_));
    }

    std::vector<int> digits(Symbol a) const {
        std::vector<int> d(t_);
        std::uint32_t v = a;
        for (int i = 0; i < t_; ++i) {
            d[i] = static_cast<int>(v % p_);
            v /= p_;
        }
        return d;
    }

    Symbol pack(const std::vector<int>& d) const {
        std::uint32_t v = 0;
        for (int i = t_ - 1; i >= 0; --i) v = v * p_ + static_cast<std::uint32_t>(d[i]);
        return static_cast<Symbol>(v);
    }

    Symbol digitwise(Symbol a, Symbol b, bool subtract) const {
        std::vector<int> da = digits(a), db = digits(b);
        for (int i = 0; i < t_; ++i) da[i] = subtract ? (da[i] - db[i] + p_) % p_ : (da[i] + db[i]) % p_;
        return pack(da);
    }

    void validate_modulus() const {
        if (static_cast<int>(modulus_.size()) != t_ + 1)
            throw validation_error("FieldSpec: modulus must list t+1 coefficients");
        for (int c : modulus_)
            if (c < 0 || c >= p_) throw validation_error("FieldSpec: modulus coefficient out of [0, p)", c);
        if (modulus_.back() != 1) throw validation_error("FieldSpec: modulus must be monic");
        // trial division by every monic polynomial of degree 1..t/2
        for (int d = 1; 2 * d <= t_; ++d) {
            std::uint64_t combos = 1;
            for (int i = 0; i < d; ++i) combos *= static_cast<std::uint64_t>(p_);
            for (std::uint64_t code = 0; code < combos; ++code) {
                std::vector<int> divisor(d + 1);
                std::uint64_t v = code;
                for (int i = 0; i < d; ++i) {
                    divisor[i] = static_cast<int>(v % p_);
                    v /= p_;
                }
                divisor[d] = 1;
                if (divides(divisor, modulus_)) {
                    throw validation_error("FieldSpec: modulus is reducible over GF(" + std::to_string(p_) + ")");
                }
            }
        }
    }

    bool divides(const std::vector<int>& divisor, std::vector<int> rem) const {
        const int dd = static_cast<int>(divisor.size()) - 1;
        for (int d = static_cast<int>(rem.size()) - 1; d >= dd; --d) {
            const int c = rem[d];
            if (c == 0) continue;
            // divisor is monic, so the quotient coefficient is just c
            for (int i = 0; i <= dd; ++i) rem[d - dd + i] = ((rem[d - dd + i] - c * divisor[i]) % p_ + p_) % p_;
        }
        for (int i = 0; i < dd; ++i)
            if (rem[i] != 0) return false;
        return true;
    }

    int p_;
    int t_;
    std::uint32_t q_ = 0;
    std::vector<int> modulus_;
    std::uint32_t mod_bits_ = 0;
};

inline Symbol field_add(Symbol a, Symbol b, const FieldSpec& spec) { return spec.add(a, b); }
inline Symbol field_mul(Symbol a, Symbol b, const FieldSpec& spec) { return spec.mul(a, b); }
inline Symbol field_inv(Symbol a, const FieldSpec& spec) { return spec.inv(a); }

}  // namespace apc
