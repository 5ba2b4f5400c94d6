#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "efstein/measure.hpp"
#include "efstein/rng.hpp"
#include "test_support.hpp"

using namespace efstein;

TEST_CASE("construction normalizes, sorts and drops zero-weight faces") {
    auto mu = WeightedComplex::create(PartiteUniverse::with_sizes(std::vector<int>{2, 2}),
                                      {{1, 1}, {0, 0}, {0, 1}, {1, 0}},
                                      {2.0, 2.0, 0.0, 4.0});
    CHECK(mu->face_count() == 3);  // zero face dropped
    // canonical lexicographic order
    CHECK(mu->face(0)[0] == 0);
    CHECK(mu->face(0)[1] == 0);
    CHECK(mu->face(2)[0] == 1);
    CHECK(mu->face(2)[1] == 1);
    CHECK(mu->weight(0) == doctest::Approx(0.25));
    double total = 0;
    for (int z = 0; z < mu->face_count(); ++z) total += mu->weight(z);
    CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("construction rejects malformed input") {
    auto u2 = [] { return PartiteUniverse::with_sizes(std::vector<int>{2, 2}); };
    CHECK_THROWS_AS(WeightedComplex::create(u2(), {{0, 0}, {0, 0}}, {0.5, 0.5}),
                    InvalidMeasure);  // duplicate face
    CHECK_THROWS_AS(WeightedComplex::create(u2(), {{0, 2}}, {1.0}), InvalidMeasure);
    CHECK_THROWS_AS(WeightedComplex::create(u2(), {{0, 0}}, {-1.0}), InvalidMeasure);
    CHECK_THROWS_AS(WeightedComplex::create(u2(), {{0, 0}}, {0.0}), InvalidMeasure);
    // strict policy: raw sum must be within 1e-6 of 1
    CHECK_THROWS_AS(WeightedComplex::create(u2(), {{0, 0}, {1, 1}}, {0.6, 0.6},
                                            WeightPolicy::Strict),
                    InvalidMeasure);
    CHECK_NOTHROW(WeightedComplex::create(u2(), {{0, 0}, {1, 1}}, {0.5, 0.5},
                                          WeightPolicy::Strict));
}

TEST_CASE("part count cap") {
    std::vector<int> sizes(13, 1);
    CHECK_THROWS_AS(gen_product_uniform(sizes), InvalidMeasure);
}

TEST_CASE("marginal of a uniform product is the uniform marginal") {
    auto mu = fixtures::uniform_bits(2);
    const Marginal& m = mu->marginal(Subset::single(0));
    REQUIRE(m.size() == 2);
    CHECK(m.mass[0] == doctest::Approx(0.5));
    CHECK(m.mass[1] == doctest::Approx(0.5));
}

TEST_CASE("eta-correlated marginals stay uniform") {
    auto mu = fixtures::eta_pair(0.3);
    for (int part = 0; part < 2; ++part) {
        const Marginal& m = mu->marginal(Subset::single(part));
        REQUIRE(m.size() == 2);
        CHECK(m.mass[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(m.mass[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("marginal at the full subset is the measure itself") {
    auto mu = gen_product(std::vector<int>{3, 2, 2}, 7);
    const Marginal& m = mu->marginal(Subset::full(3));
    REQUIRE(m.size() == mu->face_count());
    for (int z = 0; z < m.size(); ++z) CHECK(m.mass[z] == mu->weight(z));
}

TEST_CASE("nested marginals agree: marginal(marginal(mu,T),S) = marginal(mu,S)") {
    auto mu = gen_product(std::vector<int>{3, 3, 2, 2}, 3);
    const Subset t(0b1011), s(0b0011);
    auto mt = marginal_complex(mu, t);
    // S within T uses T-local part indexing {0,1}
    const Marginal& nested = mt->marginal(Subset(0b011));
    const Marginal& direct = mu->marginal(s);
    REQUIRE(nested.size() == direct.size());
    for (int i = 0; i < nested.size(); ++i)
        CHECK(std::abs(nested.mass[i] - direct.mass[i]) < 1e-12);
}

TEST_CASE("links of a product are products of the remaining marginals") {
    auto mu = gen_product(std::vector<int>{2, 3, 2}, 11);
    PartialAssignment x{Subset::single(1), {2}};
    auto lk = link(mu, x);
    const Marginal& direct = mu->marginal(Subset(0b101));
    REQUIRE(lk->face_count() == direct.size());
    for (int z = 0; z < lk->face_count(); ++z)
        CHECK(lk->weight(z) == doctest::Approx(direct.mass[z]).epsilon(1e-12));
}

TEST_CASE("eta-correlated link is the biased coin") {
    const double eta = 0.2;
    auto mu = fixtures::eta_pair(eta);
    auto lk = link(mu, PartialAssignment{Subset::single(0), {1}});
    REQUIRE(lk->face_count() == 2);
    CHECK(lk->weight(1) == doctest::Approx((1 + eta) / 2).epsilon(1e-12));
    CHECK(lk->weight(0) == doctest::Approx((1 - eta) / 2).epsilon(1e-12));
}

TEST_CASE("link of a link equals the link at the union assignment") {
    auto mu = gen_product(std::vector<int>{2, 2, 3}, 5);
    auto l1 = link(mu, PartialAssignment{Subset::single(0), {1}});
    // part 1 of mu is part 0 of the first link
    auto l2 = link(l1, PartialAssignment{Subset::single(0), {0}});
    auto both = link(mu, PartialAssignment{Subset(0b011), {1, 0}});
    REQUIRE(l2->face_count() == both->face_count());
    for (int z = 0; z < l2->face_count(); ++z)
        CHECK(l2->weight(z) == doctest::Approx(both->weight(z)).epsilon(1e-12));
}

TEST_CASE("link normalization: every link sums to one") {
    auto mu = gen_sparse_random(std::vector<int>{3, 3, 3}, 0.5, 2);
    for (Subset s : {Subset::single(0), Subset(0b011)}) {
        const Marginal& m = mu->marginal(s);
        for (int i = 0; i < m.size(); ++i) {
            auto pt = m.point(i);
            auto lk = link(mu, PartialAssignment{s, {pt.begin(), pt.end()}});
            double total = 0;
            for (int z = 0; z < lk->face_count(); ++z) total += lk->weight(z);
            CHECK(std::abs(total - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("link outside the support throws ZeroMassPoint") {
    auto mu = WeightedComplex::create(PartiteUniverse::with_sizes(std::vector<int>{2, 2}),
                                      {{0, 0}, {1, 1}}, {0.5, 0.5});
    CHECK_THROWS_AS(link(mu, PartialAssignment{Subset(0b011), {0, 1}}), ZeroMassPoint);
}

TEST_CASE("norms and expectation on constants and the dictator") {
    auto mu = fixtures::uniform_bits(2);
    Fn c = Fn::constant(mu, Subset::full(2), 3.0);
    CHECK(expectation(c) == doctest::Approx(3.0));
    CHECK(norm_2(c) == doctest::Approx(3.0));
    CHECK(norm_inf(c) == doctest::Approx(3.0));

    Fn f = fixtures::dictator(mu);
    CHECK(inner(f, f) == doctest::Approx(0.5));          // ||f||_2^2
    CHECK(std::pow(norm_4(f), 4) == doctest::Approx(0.5));  // ||f||_4^4
    Fn one = Fn::constant(mu, Subset::full(2), 1.0);
    CHECK(inner(f, one) == doctest::Approx(expectation(f)));
}

TEST_CASE("p-norm ladder on probability spaces") {
    auto mu = gen_product(std::vector<int>{3, 2, 3}, 9);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Fn f = fixtures::dense(mu, seed);
        const double n43 = norm_p(f, 4.0 / 3.0);
        const double n2 = norm_2(f), n4 = norm_4(f), ni = norm_inf(f);
        CHECK(n43 <= n2 + 1e-12);
        CHECK(n2 <= n4 + 1e-12);
        CHECK(n4 <= ni + 1e-12);
    }
}

TEST_CASE("domain mismatch is rejected") {
    auto mu = fixtures::uniform_bits(2);
    auto nu = fixtures::eta_pair(0.2);
    Fn f = fixtures::dictator(mu);
    Fn g = fixtures::dictator(nu);
    CHECK_THROWS_AS((void)inner(f, g), DomainMismatch);
    Fn h = Fn::constant(mu, Subset::single(0), 1.0);
    CHECK_THROWS_AS((void)inner(f, h), DomainMismatch);
    CHECK_THROWS_AS(Fn(mu, Subset::full(2), {1.0}), DomainMismatch);  // wrong length
}

TEST_CASE("lift and restriction") {
    auto mu = fixtures::uniform_bits(2);
    Fn c = Fn::constant(mu, Subset::single(0), 2.5);
    Fn lifted = lift(c);
    CHECK(lifted.home() == Subset::full(2));
    for (double v : lifted.values()) CHECK(v == doctest::Approx(2.5));

    Fn f = fixtures::dictator(mu);
    Fn restricted = restrict_fix(f, PartialAssignment{Subset::single(0), {1}});
    for (double v : restricted.values()) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("total expectation of squared restrictions recovers the norm") {
    auto mu = gen_perturbed_product(std::vector<int>{3, 3, 2}, 0.1, 4);
    Fn f = fixtures::dense(mu, 21);
    for (Subset s : {Subset::single(1), Subset(0b101)}) {
        const Marginal& m = mu->marginal(s);
        double total = 0;
        for (int i = 0; i < m.size(); ++i) {
            auto pt = m.point(i);
            Fn r = restrict_fix(f, PartialAssignment{s, {pt.begin(), pt.end()}});
            total += m.mass[i] * inner(r, r);
        }
        CHECK(total == doctest::Approx(inner(f, f)).epsilon(1e-12));
    }
}

TEST_CASE("total expectation: E_x E_{mu_x} f = E f for every S") {
    auto mu = gen_sparse_random(std::vector<int>{3, 3, 3}, 0.7, 8);
    Fn f = fixtures::dense(mu, 19);
    const double mean = expectation(f);
    for (Subset s : all_subsets(3)) {
        if (s == Subset::full(3)) continue;
        const Marginal& m = mu->marginal(s);
        double total = 0;
        for (int i = 0; i < m.size(); ++i) {
            auto pt = m.point(i);
            Fn r = restrict_fix(f, PartialAssignment{s, {pt.begin(), pt.end()}});
            total += m.mass[i] * expectation(r);
        }
        CHECK(total == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("restriction of empty assignment is the identity") {
    auto mu = fixtures::uniform_bits(3);
    Fn f = fixtures::dense(mu, 1);
    Fn r = restrict_fix(f, PartialAssignment{Subset::empty(), {}});
    CHECK(r.complex()->id() == mu->id());
    for (int i = 0; i < f.size(); ++i) CHECK(f[i] == r[i]);
}

TEST_CASE("restriction of a junta-reduced function") {
    auto mu = gen_perturbed_product(std::vector<int>{2, 3, 2}, 0.2, 6);
    // h lives on {0,1}; fixing x_0 leaves a function of x_1 on the link
    const Marginal& m01 = mu->marginal(Subset(0b011));
    std::vector<double> v(std::size_t(m01.size()));
    for (int i = 0; i < m01.size(); ++i) v[i] = 10.0 * m01.point(i)[0] + m01.point(i)[1];
    Fn h(mu, Subset(0b011), v);
    Fn r = restrict_fix(h, PartialAssignment{Subset::single(0), {1}});
    CHECK(r.home() == Subset::single(0));  // part 1 of mu is part 0 of the link
    const Marginal& lm = r.complex()->marginal(r.home());
    for (int i = 0; i < r.size(); ++i)
        CHECK(r[i] == doctest::Approx(10.0 + lm.point(i)[0]));

    CHECK_THROWS_AS(restrict_fix(h, PartialAssignment{Subset::single(2), {0}}),
                    DomainMismatch);  // subset outside home
    CHECK_THROWS_AS(embed(h, Subset::single(0)), DomainMismatch);
}

TEST_CASE("pairwise sum matches naive sum") {
    SplitRng rng(99);
    std::vector<double> xs(1000);
    for (double& x : xs) x = rng.symmetric();
    double naive = 0;
    for (double x : xs) naive += x;
    CHECK(pairwise_sum(xs) == doctest::Approx(naive).epsilon(1e-12));
}
