#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "apc/ensemble.hpp"

using apc::Ensemble;
using apc::FieldSpec;
using apc::Permutation;
using apc::Rng;
using apc::Symbol;
using apc::TestMode;

namespace {

FieldSpec gf4() { return FieldSpec(2, 2); }
FieldSpec gf5() { return FieldSpec(5, 1); }

std::set<std::vector<Symbol>> support_images(const Ensemble& e) {
    std::set<std::vector<Symbol>> out;
    for (const auto& [pi, w] : e.enumerate_support()) out.insert(pi.images());
    return out;
}

}  // namespace

TEST_CASE("additive ensemble support") {
    const Ensemble e2 = Ensemble::additive(FieldSpec(2, 1));
    const auto supp2 = support_images(e2);
    REQUIRE(supp2.size() == 2);
    CHECK(supp2.count({0, 1}) == 1);  // identity
    CHECK(supp2.count({1, 0}) == 1);  // bit flip

    const Ensemble e4 = Ensemble::additive(gf4());
    const auto supp4 = e4.enumerate_support();
    REQUIRE(supp4.size() == 4);
    for (const auto& [pi, w] : supp4) {
        CHECK(w == Catch::Approx(0.25));
        int fixed = 0;
        for (int s = 0; s < 4; ++s)
            if (pi(static_cast<Symbol>(s)) == s) ++fixed;
        CHECK(fixed == (pi.is_identity() ? 4 : 0));
    }
}

TEST_CASE("additive sampling is uniform over shifts") {
    const Ensemble e = Ensemble::additive(gf4());
    Rng rng(42);
    std::map<Symbol, int> shift_count;
    for (int i = 0; i < 4000; ++i) shift_count[e.sample(rng)(0)]++;  // pi(0) identifies the shift
    REQUIRE(shift_count.size() == 4);
    for (const auto& [shift, count] : shift_count) {
        CHECK(count >= 850);
        CHECK(count <= 1150);
    }
}

TEST_CASE("affine ensemble is sharply 2-transitive over GF(5)") {
    const Ensemble e = Ensemble::affine(gf5());
    CHECK(e.support_size() == 20);
    const auto supp = e.enumerate_support();
    CHECK(supp.size() == 20);
    for (const auto& [pi, w] : supp) CHECK(w == Catch::Approx(1.0 / 20.0).margin(1e-15));
    const auto report = e.test_independence(2, TestMode::exact);
    CHECK(report.tv_max == Catch::Approx(0.0).margin(1e-15));
    CHECK(report.domain_size == 20);
}

TEST_CASE("affine stays pairwise independent across shipped field sizes") {
    for (const FieldSpec& f : {FieldSpec(7, 1), FieldSpec(2, 3), FieldSpec(3, 2, {1, 0, 1}), FieldSpec(13, 1),
                               FieldSpec(2, 4)}) {
        const auto report = Ensemble::affine(f).test_independence(2, TestMode::exact);
        CHECK(report.tv_max == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("affine map values over GF(4)") {
    // z -> 2z + 1 must be in the support, and it sends 0 to 1
    const Ensemble e = Ensemble::affine(gf4());
    const FieldSpec f = gf4();
    std::vector<Symbol> expected(4);
    for (int z = 0; z < 4; ++z) expected[z] = f.add(f.mul(2, static_cast<Symbol>(z)), 1);
    CHECK(expected[0] == 1);
    CHECK(support_images(e).count(expected) == 1);
}

TEST_CASE("affine is not 3-wise independent for q >= 4") {
    for (const FieldSpec& f : {gf4(), gf5()}) {
        const auto report = Ensemble::affine(f).test_independence(3, TestMode::exact);
        CHECK(report.tv_max > 0.0);
    }
}

TEST_CASE("fractional-linear ensemble over GF(4)") {
    const Ensemble e = Ensemble::fractional_linear(gf4());
    CHECK(e.q() == 5);  // projective line adds the point at infinity
    CHECK(e.support_size() == 60);
    const auto supp = e.enumerate_support();
    CHECK(supp.size() == 60);
    bool has_identity = false;
    for (const auto& [pi, w] : supp)
        if (pi.is_identity()) has_identity = true;  // a=d=1, b=c=0 fixes everything including infinity
    CHECK(has_identity);
    const auto report = e.test_independence(3, TestMode::exact);
    CHECK(report.tv_max == Catch::Approx(0.0).margin(1e-15));
    CHECK(report.domain_size == 60);
}

TEST_CASE("fractional-linear is 3-wise independent across field sizes") {
    for (const FieldSpec& f : {FieldSpec(5, 1), FieldSpec(3, 2, {1, 0, 1}), FieldSpec(13, 1)}) {
        const auto report = Ensemble::fractional_linear(f).test_independence(3, TestMode::exact);
        CHECK(report.tv_max == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("uniform ensemble enumeration and caps") {
    const Ensemble e3 = Ensemble::uniform(3);
    CHECK(e3.enumerate_support().size() == 6);
    CHECK(e3.test_independence(1, TestMode::exact).tv_max == Catch::Approx(0.0).margin(1e-15));
    CHECK_THROWS_AS(Ensemble::uniform(9).enumerate_support(), apc::capacity_error);
}

TEST_CASE("uniform q=8 sampled pairs look uniform at a million trials") {
    const Ensemble e = Ensemble::uniform(8);
    Rng rng(7);
    const auto report = e.test_independence(2, TestMode::sampled, 1000000, &rng);
    CHECK(report.tv_max <= 0.01);
    CHECK(report.trials == 1000000);
}

TEST_CASE("exact independence of additive shifts: transitive but not pairwise") {
    // m = 1: the shifts act transitively, so every point's image is uniform
    for (const FieldSpec& f : {FieldSpec(2, 1), FieldSpec(3, 1), gf4(), FieldSpec(7, 1), FieldSpec(2, 3),
                               FieldSpec(11, 1), FieldSpec(13, 1), FieldSpec(2, 4)}) {
        const auto report = Ensemble::additive(f).test_independence(1, TestMode::exact);
        CHECK(report.tv_max == Catch::Approx(0.0).margin(1e-15));
    }

    // m = 2 over GF(4): image of (0,1) is the 4 shift pairs out of 12 cells.
    // Independent oracle: accumulate the distribution by direct enumeration.
    const FieldSpec f = gf4();
    std::map<std::pair<Symbol, Symbol>, double> dist;
    for (int a = 0; a < 4; ++a) dist[{f.add(0, static_cast<Symbol>(a)), f.add(1, static_cast<Symbol>(a))}] += 0.25;
    double tv = 0.0;
    int cells = 0;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            if (x == y) continue;
            ++cells;
            const auto it = dist.find({static_cast<Symbol>(x), static_cast<Symbol>(y)});
            tv += std::abs((it == dist.end() ? 0.0 : it->second) - 1.0 / 12.0);
        }
    tv *= 0.5;
    REQUIRE(cells == 12);
    CHECK(tv == Catch::Approx(2.0 / 3.0).margin(1e-12));

    const auto report = Ensemble::additive(f).test_independence(2, TestMode::exact);
    CHECK(report.tv_max == Catch::Approx(tv).margin(1e-12));
    CHECK(report.tv_max == Catch::Approx(2.0 / 3.0).margin(1e-12));
    CHECK(report.worst_tuple == std::vector<Symbol>{0, 1});
}

TEST_CASE("higher independence order dominates lower order") {
    const auto chain = [](const Ensemble& e, int max_m) {
        double prev = -1.0;
        for (int m = 1; m <= max_m; ++m) {
            const double tv = e.test_independence(m, TestMode::exact).tv_max;
            CHECK(tv >= prev - 1e-12);
            prev = tv;
        }
    };
    chain(Ensemble::additive(gf4()), 3);
    chain(Ensemble::additive(FieldSpec(2, 3)), 3);
    chain(Ensemble::affine(gf5()), 3);
    chain(Ensemble::fractional_linear(gf4()), 4);
    chain(Ensemble::uniform(4), 4);
}

TEST_CASE("independence tester rejects bad orders") {
    const Ensemble e = Ensemble::uniform(4);
    CHECK_THROWS_AS(e.test_independence(5, TestMode::exact), std::domain_error);
    CHECK_THROWS_AS(e.test_independence(0, TestMode::exact), std::domain_error);
    Rng rng(1);
    CHECK_THROWS_AS(e.test_independence(2, TestMode::sampled, 0, &rng), std::invalid_argument);
    CHECK_THROWS_AS(e.test_independence(2, TestMode::sampled, 10, nullptr), std::invalid_argument);
}

TEST_CASE("swap-or-not basics") {
    CHECK_THROWS_AS(Ensemble::swap_or_not(4, 0), std::invalid_argument);

    // one round pairs x with offset - x, so the draw is an involution
    const Ensemble e1 = Ensemble::swap_or_not(4, 1);
    Rng rng(5);
    for (int i = 0; i < 25; ++i) {
        const Permutation pi = e1.sample(rng);
        CHECK(pi.compose(pi).is_identity());
    }
}

TEST_CASE("swap-or-not mixes better with more rounds") {
    Rng rng_few(123), rng_many(123);
    const auto few = Ensemble::swap_or_not(8, 2).test_independence(2, TestMode::sampled, 200000, &rng_few);
    const auto many = Ensemble::swap_or_not(8, 32).test_independence(2, TestMode::sampled, 200000, &rng_many);
    CHECK(many.tv_max < few.tv_max);

    // same picture without sampling noise, on an enumerable instance
    const auto one = Ensemble::swap_or_not(4, 1, 1).test_independence(2, TestMode::exact);
    const auto five = Ensemble::swap_or_not(4, 5, 1).test_independence(2, TestMode::exact);
    CHECK(five.tv_max < one.tv_max);
    CHECK(five.tv_max < 0.1);
}

TEST_CASE("swap-or-not support enumeration agrees with sampling") {
    const Ensemble e = Ensemble::swap_or_not(3, 2, 99);
    const auto supp = e.enumerate_support();
    double total = 0.0;
    std::set<std::vector<Symbol>> images;
    for (const auto& [pi, w] : supp) {
        total += w;
        images.insert(pi.images());
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
    Rng rng(3);
    for (int i = 0; i < 30; ++i) CHECK(images.count(e.sample(rng).images()) == 1);
}

TEST_CASE("table ensemble semantics") {
    CHECK_THROWS_AS(Ensemble::table({}), apc::validation_error);
    CHECK_THROWS_AS(Ensemble::table({Permutation::identity(3), Permutation::identity(4)}), apc::validation_error);

    const Ensemble single = Ensemble::table({Permutation::identity(4)});
    Rng rng(8);
    for (int i = 0; i < 10; ++i) CHECK(single.sample(rng).is_identity());

    // the four additive shifts as an explicit table behave like the additive family
    const Ensemble additive = Ensemble::additive(gf4());
    std::vector<Permutation> shifts;
    for (const auto& [pi, w] : additive.enumerate_support()) shifts.push_back(pi);
    const Ensemble tabled = Ensemble::table(shifts);
    CHECK(support_images(tabled) == support_images(additive));
    CHECK(tabled.test_independence(2, TestMode::exact).tv_max ==
          Catch::Approx(additive.test_independence(2, TestMode::exact).tv_max).margin(1e-12));

    // duplicates weight by multiplicity
    const Ensemble dup = Ensemble::table({Permutation::identity(3), Permutation::identity(3),
                                          Permutation::from_images({1, 2, 0})});
    const auto supp = dup.enumerate_support();
    REQUIRE(supp.size() == 2);
    double id_weight = 0.0;
    for (const auto& [pi, w] : supp)
        if (pi.is_identity()) id_weight = w;
    CHECK(id_weight == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("table file round trip with comments") {
    const std::string path = "table_test.txt";
    {
        std::ofstream out(path);
        out << "# three permutations over q = 3\n";
        out << "0 1 2\n";
        out << "\n";
        out << "1 2 0\n";
        out << "2 0 1\n";
    }
    const Ensemble e = Ensemble::table_from_file(path);
    CHECK(e.q() == 3);
    CHECK(e.support_size() == 3);
    CHECK(e.descriptor() == "table:" + path);

    {
        std::ofstream out(path);
        out << "0 0 2\n";
    }
    CHECK_THROWS_AS(Ensemble::table_from_file(path), apc::validation_error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(Ensemble::table_from_file("no_such_file.txt"), apc::io_error);
}

TEST_CASE("sampling is reproducible from the seed") {
    for (const char* desc : {"additive:2^2/1,1,1", "affine:5^1", "pgl:2^2/1,1,1", "uniform:8", "swapnot:8:16"}) {
        const Ensemble e = Ensemble::parse(desc);
        Rng a(12345), b(12345);
        for (int i = 0; i < 5; ++i) CHECK(e.sample(a) == e.sample(b));
    }
}

TEST_CASE("descriptors parse and round trip") {
    for (const char* desc : {"additive:2^2/1,1,1", "affine:5^1", "pgl:2^2/1,1,1", "uniform:8", "swapnot:8:64"}) {
        const Ensemble e = Ensemble::parse(desc);
        CHECK(e.descriptor() == desc);
    }
    CHECK(Ensemble::parse("swapnot:8:64:7").descriptor() == "swapnot:8:64:7");
    CHECK_THROWS_AS(Ensemble::parse("nope:3"), apc::validation_error);
    CHECK_THROWS_AS(Ensemble::parse("uniform"), apc::validation_error);
    CHECK_THROWS_AS(Ensemble::parse("uniform:x"), apc::validation_error);
}

TEST_CASE("support probabilities sum to one") {
    for (const char* desc : {"additive:2^3/1,1,0,1", "affine:7^1", "pgl:3^1", "uniform:5", "swapnot:4:3"}) {
        const Ensemble e = Ensemble::parse(desc);
        double total = 0.0;
        for (const auto& [pi, w] : e.enumerate_support()) {
            total += w;
            CHECK(pi.q() == e.q());
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("randomness accounting") {
    CHECK(Ensemble::additive(gf4()).random_bits_cost(3, 5) == 30);         // 3*5*2
    CHECK(Ensemble::affine(gf5()).random_bits_cost(2, 2) == 20);           // 2*2*ceil(log2 20)
    CHECK(Ensemble::uniform(8).random_bits_cost(1, 1) == 16);              // ceil(log2 8!)
    CHECK(Ensemble::swap_or_not(8, 64).random_bits_cost(1, 1) == 64 * 4);  // rounds*(log2 q + 1)
    CHECK(Ensemble::uniform(2).random_bits_cost(1, 1) == 1);               // log2 2! exactly
}

TEST_CASE("claimed independence metadata") {
    CHECK(Ensemble::additive(gf4()).claimed_m() == 1);
    CHECK(Ensemble::affine(gf5()).claimed_m() == 2);
    CHECK(Ensemble::fractional_linear(gf4()).claimed_m() == 3);
    CHECK(Ensemble::uniform(6).claimed_m() == 6);
    Ensemble sw = Ensemble::swap_or_not(8, 32);
    CHECK(sw.claimed_m() == 0);
    Rng rng(2);
    const auto measured = sw.test_independence(2, TestMode::sampled, 50000, &rng);
    sw.set_claimed(2, measured.tv_max);
    CHECK(sw.claimed_m() == 2);
    CHECK(sw.claimed_delta() == measured.tv_max);
}
