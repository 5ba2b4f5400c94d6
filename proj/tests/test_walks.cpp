#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "efstein/calculus.hpp"
#include "efstein/walks.hpp"
#include "test_support.hpp"

using namespace efstein;

TEST_CASE("noise endpoints: rho = 1 is the identity, rho = 0 is the mean") {
    auto mu = gen_perturbed_product(std::vector<int>{3, 3}, 0.2, 1);
    Fn f = fixtures::dense(mu, 2);
    Fn t1 = noise_direct(f, 1.0);
    for (int i = 0; i < f.size(); ++i) CHECK(t1[i] == doctest::Approx(f[i]).epsilon(1e-12));
    Fn t0 = noise_direct(f, 0.0);
    const double mean = expectation(f);
    for (double v : t0.values()) CHECK(v == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("dictator under half noise on the uniform pair") {
    auto mu = fixtures::uniform_bits(2);
    Fn f = fixtures::dictator(mu);
    Fn t = noise_direct(f, 0.5);
    // 1/2 + (x_0 - 1/2)/2: faces 00,01,10,11
    CHECK(t[0] == doctest::Approx(0.25));
    CHECK(t[1] == doctest::Approx(0.25));
    CHECK(t[2] == doctest::Approx(0.75));
    CHECK(t[3] == doctest::Approx(0.75));
    CHECK(stability(f, 0.5) == doctest::Approx(5.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("spectral and direct noise agree on every measure") {
    for (auto mu : {gen_product(std::vector<int>{3, 2, 2}, 3),
                    gen_perturbed_product(std::vector<int>{3, 3, 2}, 0.3, 4),
                    gen_sparse_random(std::vector<int>{3, 3, 3}, 0.6, 5)}) {
        Fn f = fixtures::dense(mu, 6);
        for (double rho : {0.0, 0.3, 0.7, 1.0}) {
            Fn a = noise_direct(f, rho);
            Fn b = noise_spectral(f, rho);
            Fn d = a - b;
            CHECK(norm_2(d) <= 1e-9 * std::max(1.0, norm_2(f)));
        }
    }
}

TEST_CASE("noise semigroup on exact products") {
    auto mu = gen_product(std::vector<int>{2, 3, 2}, 7);
    Fn f = fixtures::dense(mu, 8);
    const double r1 = 0.6, r2 = 0.5;
    Fn twice = noise_direct(noise_direct(f, r1), r2);
    Fn once = noise_direct(f, r1 * r2);
    Fn d = twice - once;
    CHECK(norm_2(d) <= 1e-10);
}

TEST_CASE("noise contracts and Boolean stability is monotone in rho on products") {
    auto mu = gen_product(std::vector<int>{3, 3, 2}, 9);
    Fn f = fixtures::dense(mu, 10);
    for (double rho : {0.0, 0.25, 0.5, 0.9, 1.0})
        CHECK(norm_2(noise_direct(f, rho)) <= norm_2(f) + 1e-12);

    Fn b = gen_function(mu, FnSpec{FnSpec::Kind::RandomBoolean, 0, 0, 0, 0.4, 1, 0, 11});
    double prev = -1;
    for (double rho : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        const double s = stability(b, rho);
        CHECK(s >= prev - 1e-12);
        prev = s;
    }
}

TEST_CASE("up-down walk: both routes agree; constants are fixed points") {
    for (auto mu : {gen_product(std::vector<int>{3, 3}, 1),
                    gen_sparse_random(std::vector<int>{3, 2, 3}, 0.7, 2)}) {
        Fn f = fixtures::dense(mu, 3);
        Fn a = updown(f);
        Fn b = updown_spectral(f);
        Fn d = a - b;
        CHECK(norm_2(d) <= 1e-9 * std::max(1.0, norm_2(f)));

        Fn c = Fn::constant(mu, f.home(), 1.3);
        Fn tc = updown(c);
        for (double v : tc.values()) CHECK(v == doctest::Approx(1.3).epsilon(1e-12));
    }
}

TEST_CASE("up-down walk of the uniform dictator matches the two-term spectral sum") {
    auto mu = fixtures::uniform_bits(2);
    Fn f = fixtures::dictator(mu);
    Fn t = updown(f);
    // f^{=0} + (1/2) f^{={0}} = 1/2 + (x_0 - 1/2)/2
    CHECK(t[0] == doctest::Approx(0.25));
    CHECK(t[3] == doctest::Approx(0.75));
}

TEST_CASE("the walk gap <f - Tf, f> is nonnegative") {
    auto mu = gen_perturbed_product(std::vector<int>{3, 3, 3}, 0.3, 4);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Fn f = fixtures::dense(mu, seed);
        Fn gap = f - updown(f);
        CHECK(inner(gap, f) >= -1e-12);
    }
}

TEST_CASE("shadow membership and down-measure") {
    auto mu = fixtures::uniform_bits(2);
    Fn all = Fn::constant(mu, Subset::full(2), 1.0);
    ShadowSet sh = shadow(all);
    CHECK(sh.down_mass == doctest::Approx(1.0).epsilon(1e-12));

    Fn none = Fn::constant(mu, Subset::full(2), 0.0);
    CHECK(shadow(none).down_mass == 0.0);

    // a single face contributes one codim-1 face per dropped part
    Fn single(mu, Subset::full(2), {1.0, 0.0, 0.0, 0.0});
    ShadowSet s1 = shadow(single);
    CHECK(s1.down_mass == doctest::Approx(0.5).epsilon(1e-12));  // 2 * (1/2) * (1/2)

    Fn notbool(mu, Subset::full(2), {0.5, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(shadow(notbool), NotBoolean);
}

TEST_CASE("small-set expansion check on a global set and its error paths") {
    auto mu = gen_product_uniform(std::vector<int>{6, 6, 6});
    FnSpec gs{FnSpec::Kind::RandomGlobalSet, 0, 0, 0, 0.1, 1, 0, 21};
    Fn f = gen_function(mu, gs);
    const double delta = globalness(f, 1).delta_min;
    CheckRecord r = check_sse(f, 0.5, 1, delta, 0.0);
    CHECK(r.status == CheckStatus::Pass);
    CHECK(r.lhs <= r.rhs_explicit);

    CHECK_THROWS_AS(check_sse(f, 0.5, 1, delta * 0.1, 0.0), NotGlobal);
    Fn notbool = fixtures::dense(mu, 1);
    CHECK_THROWS_AS(check_sse(notbool, 0.5, 1, 1.0, 0.0), NotBoolean);
}

TEST_CASE("noise upper bound holds with the 2^{4k} constant") {
    // exact products: no epsilon slack needed
    auto prod = gen_product(std::vector<int>{3, 3, 2}, 3);
    Fn f = fixtures::dense(prod, 4);
    for (int d = 0; d <= 2; ++d) {
        CheckRecord r = check_noise_bound(f, 0.5, d, 0.0);
        CHECK(r.status == CheckStatus::Pass);
    }
    // eta sweep with the certified epsilon
    for (double eta : {0.01, 0.05, 0.1}) {
        auto mu = fixtures::eta_pair(eta);
        Fn g = fixtures::dense(mu, 5);
        CheckRecord r = check_noise_bound(g, 0.7, 1, eta);
        CHECK(r.status == CheckStatus::Pass);
    }
}

TEST_CASE("dictators violate the small-set expansion conclusion") {
    auto mu = fixtures::uniform_bits(2);
    Fn f = fixtures::dictator(mu);
    // stability 5/16 exceeds (rho + 100 delta_ref^2) ||f||_2^2 at small delta_ref
    const double delta_ref = 0.03;
    const double bound = (0.5 + 100.0 * delta_ref * delta_ref) * inner(f, f);
    CHECK(stability(f, 0.5) > bound);
    // and the precondition correctly rejects them
    CHECK_THROWS_AS(check_sse(f, 0.5, 1, delta_ref, 0.0), NotGlobal);
}

TEST_CASE("shadow bound on tiny global sets of a skewed product") {
    const double zeta = 0.01;
    const std::vector<double> m = {1.0 - zeta, zeta / 3, zeta / 3, zeta / 3};
    auto mu = gen_product({m, m, m, m});

    // indicator of a few all-light faces
    std::vector<double> v(std::size_t(mu->face_count()), 0.0);
    int placed = 0;
    for (int z = 0; z < mu->face_count() && placed < 5; ++z) {
        auto face = mu->face(z);
        bool light = true;
        for (int i = 0; i < 4; ++i) light = light && face[i] >= 1;
        if (light && (z % 7 == 0)) {
            v[z] = 1.0;
            ++placed;
        }
    }
    REQUIRE(placed > 0);
    Fn a(mu, Subset::full(4), std::move(v));
    CHECK(globalness(a, 1).delta_min <= 1.0 / 200.0);

    auto records = check_kk(a, 1, 1.0 / 200.0, 0.0);
    REQUIRE(records.size() == 2);
    CHECK(records[0].status == CheckStatus::Pass);  // mu(A)(1 + d/2k) <= shadow mass
    CHECK(records[1].status == CheckStatus::Pass);  // walk identity
    CHECK(records[0].lhs == doctest::Approx(expectation(a) * (1 + 1.0 / 8.0)));

    // the walk identity is tight on both ends:
    Fn gap = a - updown(a);
    const double walk = inner(gap, a);
    ShadowSet sh = shadow(a);
    CHECK(walk <= sh.down_mass - expectation(a) + 1e-9);
}

TEST_CASE("shadow bound error paths") {
    auto mu = fixtures::uniform_bits(4);
    Fn all = Fn::constant(mu, Subset::full(4), 1.0);
    // delta above (200 d)^{-d} is rejected before globalness
    CHECK_THROWS_AS(check_kk(all, 1, 0.5, 0.0), PreconditionDelta);
    // everything-set is not (1, 1/200)-global
    CHECK_THROWS_AS(check_kk(all, 1, 1.0 / 200.0, 0.0), NotGlobal);

    Fn empty = Fn::constant(mu, Subset::full(4), 0.0);
    auto records = check_kk(empty, 1, 1.0 / 200.0, 0.0);
    CHECK(records[0].status == CheckStatus::Pass);  // 0 >= 0
    CHECK(records[0].lhs == 0.0);
    CHECK(records[0].rhs_explicit == 0.0);

    Fn notbool = fixtures::dense(mu, 2);
    CHECK_THROWS_AS(check_kk(notbool, 1, 1.0 / 200.0, 0.0), NotBoolean);
}

TEST_CASE("walk identity equals the two-step disagreement probability") {
    // <f - Tf, f> = sum over codim-1 faces of mu_down * p (1 - p), where p is
    // the conditional mass of A in the link; verified by direct enumeration.
    auto mu = gen_product(std::vector<int>{3, 3, 2}, 6);
    Fn a = gen_function(mu, FnSpec{FnSpec::Kind::RandomBoolean, 0, 0, 0, 0.4, 1, 0, 13});
    const int k = 3;
    double direct = 0.0;
    for (int i = 0; i < k; ++i) {
        const Subset s = Subset::full(k).without(i);
        const Marginal& m = mu->marginal(s);
        const Marginal& mfull = mu->marginal(Subset::full(k));
        std::vector<double> mass_in(std::size_t(m.size()), 0.0);
        for (int z = 0; z < mu->face_count(); ++z)
            if (a[mfull.face_to_point[z]] > 0.5) mass_in[m.face_to_point[z]] += mu->weight(z);
        for (int x = 0; x < m.size(); ++x) {
            const double p = mass_in[x] / m.mass[x];
            direct += (m.mass[x] / k) * p * (1.0 - p);
        }
    }
    Fn gap = a - updown(a);
    CHECK(inner(gap, a) == doctest::Approx(direct).epsilon(1e-10));
}
