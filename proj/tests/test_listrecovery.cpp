#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "apc/apcode.hpp"
#include "apc/listrecovery.hpp"

using apc::build_code;
using apc::capacity;
using apc::CodeMultiset;
using apc::Codeword;
using apc::Ensemble;
using apc::eta_min;
using apc::ListTuple;
using apc::LRParams;
using apc::LRVerdict;
using apc::PermMatrix;
using apc::Permutation;
using apc::Rng;
using apc::Symbol;

namespace {

CodeMultiset random_code(int q, int n, int k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Symbol> flat((std::uint64_t{1} << k) * static_cast<std::uint64_t>(n));
    for (auto& s : flat) s = static_cast<Symbol>(apc::next_below(rng, static_cast<std::uint64_t>(q)));
    return CodeMultiset::from_flat(q, n, k, std::move(flat));
}

CodeMultiset repeated_word_code(int q, int n, int k, Symbol value) {
    std::vector<Symbol> flat((std::uint64_t{1} << k) * static_cast<std::uint64_t>(n), value);
    return CodeMultiset::from_flat(q, n, k, std::move(flat));
}

}  // namespace

TEST_CASE("covers implements the floor radius") {
    const ListTuple tuple = ListTuple::make(3, {{0}, {0}, {0}, {0}});
    const Codeword all_zero(4, 0);
    const Codeword two_miss = {0, 0, 1, 1};
    const Codeword three_miss = {0, 1, 1, 1};
    CHECK(apc::covers(tuple, all_zero, 0.0));
    CHECK(apc::covers(tuple, three_miss, 1.0));
    CHECK_FALSE(apc::covers(tuple, two_miss, 0.0));
    CHECK(apc::covers(tuple, two_miss, 0.5));        // floor(0.5 * 4) = 2
    CHECK_FALSE(apc::covers(tuple, three_miss, 0.5));
    CHECK(apc::mismatch_threshold(1.0 / 3.0, 3) == 1);  // exact rational radius
}

TEST_CASE("ListTuple validation") {
    CHECK_THROWS_AS(ListTuple::make(3, {}), apc::validation_error);
    CHECK_THROWS_AS(ListTuple::make(3, {{0, 1}, {0}}), apc::validation_error);   // ragged sizes
    CHECK_THROWS_AS(ListTuple::make(3, {{0, 0}}), apc::validation_error);        // duplicate
    CHECK_THROWS_AS(ListTuple::make(3, {{0, 5}}), apc::validation_error);        // out of range
    CHECK_THROWS_AS(ListTuple::make(2, {{0, 1}}), apc::validation_error);        // ell = q
    const ListTuple t = ListTuple::make(4, {{3, 1}});
    CHECK(t.sets[0] == std::vector<Symbol>{1, 3});  // canonical sorted form
}

TEST_CASE("exhaustive search on the minimal code") {
    const CodeMultiset code = CodeMultiset::from_words(2, 1, 1, {{0}, {1}});
    const LRVerdict v = apc::max_intersection_exhaustive(code, 0.0, 1);
    CHECK(v.max_count == 1);
    CHECK(v.exhaustive);
    CHECK(apc::intersection_count(code, v.witness, 0.0) == v.max_count);
    // both singleton tuples cover one word; ties resolve to the lex-smallest
    CHECK(v.witness.sets == std::vector<std::vector<Symbol>>{{0}});
    const LRVerdict naive = apc::max_intersection_naive(code, 0.0, 1);
    CHECK(naive.witness.sets == std::vector<std::vector<Symbol>>{{0}});
}

TEST_CASE("radius one covers the whole multiset") {
    const CodeMultiset code = random_code(3, 3, 3, 4);
    const LRVerdict v = apc::max_intersection_exhaustive(code, 1.0, 2);
    CHECK(v.max_count == code.size());
}

TEST_CASE("repeated words count with multiplicity") {
    const CodeMultiset code = repeated_word_code(4, 2, 2, 3);  // four copies of (3,3)
    for (int ell = 1; ell <= 2; ++ell) {
        const LRVerdict v = apc::max_intersection_exhaustive(code, 0.0, ell);
        CHECK(v.max_count == 4);
        CHECK(apc::intersection_count(code, v.witness, 0.0) == 4);
    }
}

TEST_CASE("restricted and naive searches agree") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const int q = 2 + static_cast<int>(apc::next_below(rng, 3));
        const int n = 1 + static_cast<int>(apc::next_below(rng, 3));
        const int k = 1 + static_cast<int>(apc::next_below(rng, 3));
        const int ell = 1 + static_cast<int>(apc::next_below(rng, static_cast<std::uint64_t>(std::min(q - 1, 2))));
        const CodeMultiset code = random_code(q, n, k, seed * 31 + 7);
        for (const double rho : {0.0, 0.25, 0.5}) {
            CAPTURE(q, n, k, ell, rho, seed);
            const LRVerdict fast = apc::max_intersection_exhaustive(code, rho, ell);
            const LRVerdict slow = apc::max_intersection_naive(code, rho, ell);
            REQUIRE(fast.max_count == slow.max_count);
            CHECK(apc::intersection_count(code, fast.witness, rho) == fast.max_count);
            CHECK(apc::intersection_count(code, slow.witness, rho) == slow.max_count);
        }
    }
}

TEST_CASE("naive search visits exactly choose(q,ell)^n tuples") {
    const CodeMultiset code = random_code(4, 3, 2, 12);
    const LRVerdict v = apc::max_intersection_naive(code, 0.0, 2);
    CHECK(v.tuples_visited == 6ull * 6 * 6);  // C(4,2)^3
}

TEST_CASE("max intersection is monotone in radius and list size") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const CodeMultiset code = random_code(4, 3, 3, 100 + seed);
        std::uint64_t prev = 0;
        for (const double rho : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
            const std::uint64_t cur = apc::max_intersection_exhaustive(code, rho, 2).max_count;
            CHECK(cur >= prev);
            prev = cur;
        }
        prev = 0;
        for (int ell = 1; ell <= 3; ++ell) {
            const std::uint64_t cur = apc::max_intersection_exhaustive(code, 0.25, ell).max_count;
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("list-recovery verdicts") {
    const CodeMultiset code = random_code(4, 3, 2, 5);
    const auto [always, v1] = apc::is_list_recoverable(code, LRParams{0.0, 1, 4});
    CHECK(always);  // L >= 2^k

    const CodeMultiset repeated = repeated_word_code(3, 2, 1, 1);
    const auto [ok, v2] = apc::is_list_recoverable(repeated, LRParams{0.0, 1, 1});
    CHECK_FALSE(ok);
    CHECK(v2.max_count == 2);
    CHECK(apc::covers(v2.witness, repeated.word(0), 0.0));  // witness covers the repeated word
}

TEST_CASE("randomized search lower-bounds the exhaustive one") {
    Rng rng(999);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng mk(seed);
        const int q = 2 + static_cast<int>(apc::next_below(mk, 3));
        const int n = 1 + static_cast<int>(apc::next_below(mk, 3));
        const int k = 1 + static_cast<int>(apc::next_below(mk, 3));
        const int ell = 1 + static_cast<int>(apc::next_below(mk, static_cast<std::uint64_t>(std::min(q - 1, 2))));
        const double rho = static_cast<double>(apc::next_below(mk, 3)) / 4.0;
        const CodeMultiset code = random_code(q, n, k, seed + 5000);
        const LRVerdict exact = apc::max_intersection_exhaustive(code, rho, ell);
        const LRVerdict rnd = apc::max_intersection_randomized(code, rho, ell, 2, 5, rng);
        CHECK(rnd.max_count <= exact.max_count);
        CHECK_FALSE(rnd.exhaustive);
        CHECK(apc::intersection_count(code, rnd.witness, rho) == rnd.max_count);
    }
}

TEST_CASE("randomized search finds the repeated word") {
    const CodeMultiset repeated = repeated_word_code(5, 3, 2, 2);
    Rng rng(1);
    const LRVerdict v = apc::max_intersection_randomized(repeated, 0.0, 1, 1, 3, rng);
    CHECK(v.max_count == 4);  // the full multiplicity
    CHECK_THROWS_AS(apc::max_intersection_randomized(repeated, 0.0, 1, 1, 0, rng), std::invalid_argument);
}

TEST_CASE("capacity endpoints and interior value") {
    for (int q = 3; q <= 16; ++q) {
        for (int ell = 2; ell < q; ++ell) {
            CHECK(capacity(q, ell, 0.0) ==
                  Catch::Approx(std::log(static_cast<double>(ell)) / std::log(static_cast<double>(q))).margin(1e-12));
            CHECK(capacity(q, ell, 1.0 - static_cast<double>(ell) / q) == Catch::Approx(1.0).margin(1e-12));
        }
    }
    // frozen: 0.25*log_4(8) + 0.75*log_4(8/3)
    const double direct = 0.25 * std::log(8.0) / std::log(4.0) + 0.75 * std::log(8.0 / 3.0) / std::log(4.0);
    CHECK(capacity(4, 2, 0.25) == Catch::Approx(direct).margin(1e-12));
    CHECK(capacity(4, 2, 0.25) == Catch::Approx(0.905639062229566).margin(1e-12));
    CHECK(capacity(4, 2, 1.0) == 1.0);
    CHECK_THROWS_AS(capacity(4, 4, 0.1), std::domain_error);
    CHECK_THROWS_AS(capacity(4, 2, 1.5), std::domain_error);
}

TEST_CASE("capacity is monotone and continuous at the breakpoint") {
    for (const auto& [q, ell] : std::vector<std::pair<int, int>>{{4, 2}, {8, 3}, {16, 2}}) {
        double prev = capacity(q, ell, 0.0);
        for (int i = 1; i <= 1000; ++i) {
            const double rho = static_cast<double>(i) / 1000.0;
            const double cur = capacity(q, ell, rho);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
        const double bp = 1.0 - static_cast<double>(ell) / q;
        CHECK(capacity(q, ell, bp - 1e-10) == Catch::Approx(capacity(q, ell, bp + 1e-10)).margin(1e-9));
    }
}

TEST_CASE("eta_min values and limits") {
    // 2 * log_2(4 / ln 2) / 2 = log_2(4 / 0.6931...)
    CHECK(eta_min(2, 2) == Catch::Approx(2.528766372944898).margin(1e-12));
    double prev = eta_min(2, 8);
    for (int n = 16; n <= 1024; n *= 2) {
        const double cur = eta_min(2, n);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(eta_min(1 << 16, 64) < 0.02);  // log_q -> 0 as q grows
}

TEST_CASE("rate plan formulas") {
    // ell = 1: capacity(q,1,0) = 0 and log_q C(q,1) = 1, so the rate formula
    // collapses to 1 - (1 + 1/n)/(L+1) - eta
    const int q = 4, n = 8;
    const std::uint64_t L = 7;
    const double eta = eta_min(q, n);
    const auto plan = apc::rate_and_k(q, 1, 0.0, L, n, eta);
    CHECK(plan.R == Catch::Approx(1.0 - (1.0 + 1.0 / n) / (L + 1) - eta).margin(1e-12));

    // frozen golden record
    const auto golden = apc::rate_and_k(16, 2, 0.0, 7, 8, eta_min(16, 8));
    CHECK(golden.R == Catch::Approx(0.235486770578177).margin(1e-12));
    CHECK(golden.k == 7);
    CHECK_FALSE(golden.k_integral);

    CHECK_THROWS_AS(apc::rate_and_k(16, 2, 0.0, 7, 8, 0.5 * eta_min(16, 8)), std::invalid_argument);
    try {
        apc::rate_and_k(4, 2, 0.5, 3, 8, eta_min(4, 8));  // rho at the capacity breakpoint: rate < 0
        FAIL("expected infeasible_error");
    } catch (const apc::infeasible_error& err) {
        CHECK(err.deficit() > 0.0);
    }
}

TEST_CASE("oversized searches raise capacity errors") {
    const CodeMultiset code = random_code(16, 16, 2, 3);
    CHECK_THROWS_AS(apc::max_intersection_naive(code, 0.0, 8), apc::capacity_error);
    CHECK_THROWS_AS(apc::max_intersection_exhaustive(code, 0.0, 8), apc::capacity_error);
}
