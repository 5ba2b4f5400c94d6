// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line. The whole binary is also wired into ctest.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <regex>
#include <set>
#include <sstream>

#include "efstein/calculus.hpp"
#include "efstein/generators.hpp"
#include "efstein/harness.hpp"
#include "efstein/operators.hpp"
#include "efstein/walks.hpp"

using namespace efstein;

namespace {

struct Criterion {
    int number;
    std::string name;
    std::vector<std::string> failures;

    Criterion(int n, std::string nm) : number(n), name(std::move(nm)) {}
    ~Criterion() {
        std::printf("[acceptance] %d %-28s %s\n", number, name.c_str(),
                    failures.empty() ? "PASS" : "FAIL");
        for (const auto& f : failures) std::printf("             - %s\n", f.c_str());
        std::fflush(stdout);
    }

    void expect(bool cond, const std::string& what) {
        CHECK_MESSAGE(cond, what);
        if (!cond) failures.push_back(what);
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int parse_k(const std::string& instance) {
    std::smatch m;
    static const std::regex re("k=(\\d+)");
    if (std::regex_search(instance, m, re)) return std::stoi(m[1]);
    return 5;  // conservative default
}

bool instance_is_exact(const std::string& instance) {
    return instance.find("eta[0]") != std::string::npos ||
           instance.find("gamma=0;") != std::string::npos;
}

}  // namespace

TEST_CASE("criterion 1: exact identities") {
    Criterion c(1, "exact-identities");
    SuiteConfig cfg = SuiteConfig::defaults();
    const auto t0 = std::chrono::steady_clock::now();
    auto records = run_suite("exact-identities", cfg);
    const double secs = seconds_since(t0);

    std::set<std::string> pairs;
    bool has_product = false, has_eta = false, has_perturbed = false;
    for (const auto& r : records) {
        pairs.insert(r.instance);
        has_product |= r.instance.find("product[") != std::string::npos;
        has_eta |= r.instance.find("eta[") != std::string::npos;
        has_perturbed |= r.instance.find("perturbed[") != std::string::npos;
        c.expect(r.status == CheckStatus::Pass, r.check_id + " failed on " + r.instance);
        c.expect(r.lhs < 1e-9, r.check_id + " residual " + std::to_string(r.lhs));
    }
    c.expect(pairs.size() >= 50,
             "only " + std::to_string(pairs.size()) + " (measure, function) pairs");
    c.expect(has_product && has_eta && has_perturbed, "instance families missing");
    c.expect(secs < 30.0, "runtime " + std::to_string(secs) + "s exceeds 30s");
}

TEST_CASE("criterion 2: product oracle") {
    Criterion c(2, "product-oracle");
    SuiteConfig cfg = SuiteConfig::defaults();
    const auto t0 = std::chrono::steady_clock::now();
    auto records = run_suite("product-oracle", cfg);
    const double secs = seconds_since(t0);

    int ortho = 0, parseval = 0, hyper = 0, corollary = 0, sum_infl = 0, bonami = 0;
    for (const auto& r : records) {
        c.expect(r.status == CheckStatus::Pass, r.check_id + " failed on " + r.instance);
        if (r.check_id == "C8-near-orthogonality") {
            ++ortho;
            c.expect(r.lhs < 1e-10, "orthogonality defect " + std::to_string(r.lhs));
        }
        if (r.check_id == "C9-approx-parseval") {
            ++parseval;
            c.expect(r.lhs < 1e-10, "Parseval defect " + std::to_string(r.lhs));
        }
        if (r.note.find("2*9^d") != std::string::npos) ++hyper;
        if (r.note.find("2000^d") != std::string::npos) ++corollary;
        if (r.note.find("sum_S E[I_S]") != std::string::npos) ++sum_infl;
        if (r.note.find("Bonami") != std::string::npos) ++bonami;
    }
    c.expect(ortho > 0 && parseval > 0, "orthogonality / Parseval cases missing");
    c.expect(hyper >= 10, "hypercontractivity cases missing");
    c.expect(corollary >= 10, "global-corollary cases missing");
    c.expect(sum_infl >= 10, "influence-sum cases missing");
    c.expect(bonami >= 3, "Bonami cube cases missing");
    c.expect(secs < 120.0, "runtime " + std::to_string(secs) + "s exceeds 2min");
}

TEST_CASE("criterion 3: explicit-constant eps suite") {
    Criterion c(3, "explicit-constant-sweep");
    SuiteConfig cfg = SuiteConfig::defaults();
    const auto t0 = std::chrono::steady_clock::now();
    auto records = run_suite("eps-sweep", cfg);
    const double secs = seconds_since(t0);

    const std::set<std::string> hard_ids = {
        "C5-contraction",           "C6-disjoint-averaging", "C7-composition",
        "C8-near-orthogonality",    "C9-approx-parseval",    "C10-idempotence",
        "C11-junta-orthogonality",  "C12-strong-parseval",   "C13-global-component-bound"};
    std::set<std::string> seen;
    for (const auto& r : records) {
        if (!hard_ids.count(r.check_id)) continue;
        seen.insert(r.check_id);
        c.expect(r.status == CheckStatus::Pass,
                 r.check_id + " not PASS on " + r.instance + " (" + r.note + ")");
    }
    c.expect(seen.size() == hard_ids.size(), "some of C5-C13 never ran");
    for (double eta : cfg.eta_grid) {
        std::ostringstream tag;
        tag << "eta[" << eta << "]";
        const bool found = std::any_of(records.begin(), records.end(), [&](const auto& r) {
            return r.instance.find(tag.str()) != std::string::npos;
        });
        c.expect(found, "eta grid point " + tag.str() + " missing");
    }
    c.expect(secs < 120.0, "runtime " + std::to_string(secs) + "s exceeds 2min");
}

TEST_CASE("criterion 4: certificate correctness") {
    Criterion c(4, "certificates");
    for (int i = 1; i <= 10; ++i) {
        const double eta = 0.05 * i;
        const double eps = certify_epsilon(gen_eta_correlated(eta)).epsilon;
        c.expect(std::abs(eps - eta) <= 1e-9,
                 "eta=" + std::to_string(eta) + " certified " + std::to_string(eps));
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto mu = gen_product(std::vector<int>{4, 3, 2, 2}, seed);
        const double eps = certify_epsilon(mu).epsilon;
        c.expect(eps <= 1e-10, "product seed " + std::to_string(seed) + " certified " +
                                   std::to_string(eps));
    }
}

TEST_CASE("criterion 5: main-theorem residual tracking") {
    Criterion c(5, "residual-tracking");
    SuiteConfig cfg = SuiteConfig::defaults();
    auto records = run_suite("residual-tracking", cfg);

    const std::set<std::string> tracked = {"C14-influence-bounds",
                                           "C16-hdx-hypercontractivity",
                                           "C20-l4-closeness", "C21-derivative-family"};
    std::set<std::string> seen;
    for (const auto& r : records) {
        if (!tracked.count(r.check_id)) continue;
        seen.insert(r.check_id);
        c.expect(std::isfinite(r.residual), r.check_id + " residual not finite");
        if (instance_is_exact(r.instance) && r.status != CheckStatus::Report)
            c.expect(r.status == CheckStatus::Pass,
                     r.check_id + " residual positive at eps=0 on " + r.instance + " (" +
                         r.note + ")");
        if (r.residual_ratio) {
            const double ceiling = cfg.effective_ceiling(r.check_id, parse_k(r.instance));
            c.expect(std::isfinite(*r.residual_ratio), r.check_id + " ratio not finite");
            c.expect(*r.residual_ratio <= ceiling,
                     r.check_id + " ratio " + std::to_string(*r.residual_ratio) +
                         " above ceiling " + std::to_string(ceiling));
        }
    }
    c.expect(seen.size() == tracked.size(), "a tracked check family never ran");
    // the eps = 0 anchors of the sweep must be present
    c.expect(std::any_of(records.begin(), records.end(),
                         [](const auto& r) { return instance_is_exact(r.instance); }),
             "no eps=0 anchor instances in the sweep");
}

TEST_CASE("criterion 6: applications") {
    Criterion c(6, "applications");
    SuiteConfig cfg = SuiteConfig::defaults();
    auto records = run_suite("applications", cfg);

    int c17 = 0, c18 = 0, kk_main = 0, kk_walk = 0;
    for (const auto& r : records) {
        if (r.status == CheckStatus::Report) continue;  // off-product coverage rows
        c.expect(r.status == CheckStatus::Pass,
                 r.check_id + " failed on " + r.instance + " (" + r.note + ")");
        if (r.check_id == "C17-fourier-concentration") ++c17;
        if (r.check_id == "C18-small-set-expansion") ++c18;
        if (r.check_id == "C19-kruskal-katona") {
            if (r.note.find("walk identity") != std::string::npos)
                ++kk_walk;
            else
                ++kk_main;
        }
    }
    c.expect(c17 >= 12, "too few Fourier-concentration cases");
    c.expect(c18 >= 12, "too few small-set-expansion cases");
    c.expect(kk_main >= 10, "fewer than 10 shadow-bound instances");
    c.expect(kk_walk >= 10, "fewer than 10 walk-identity records");

    // the dictator control, pinned numerically
    auto mu = gen_product_uniform(std::vector<int>{2, 2});
    FnSpec dict{FnSpec::Kind::Dictator, 0, 1, 0, 0, 1, 0, 0};
    Fn f = gen_function(mu, dict);
    const double stab = stability(f, 0.5);
    c.expect(std::abs(stab - 5.0 / 16.0) <= 1e-12,
             "dictator stability is " + std::to_string(stab) + ", not 5/16");
    const double bound = (0.5 + 100.0 * cfg.negative_delta_ref * cfg.negative_delta_ref) *
                         inner(f, f);
    c.expect(stab > bound, "dictator does not violate the global SSE conclusion");

    const bool neg_present = std::any_of(records.begin(), records.end(), [](const auto& r) {
        return r.note.find("negative control") != std::string::npos &&
               r.status == CheckStatus::Pass;
    });
    c.expect(neg_present, "negative-control records missing or failing");
}

TEST_CASE("criterion 7: determinism") {
    Criterion c(7, "determinism");
    SuiteConfig cfg = SuiteConfig::defaults();
    auto render = [&](const std::vector<CheckRecord>& rs) {
        std::ostringstream out;
        write_report(rs, ReportFormat::Jsonl, out, &cfg, /*include_runtime=*/false);
        return out.str();
    };
    auto a = run_suite("default", cfg);
    auto b = run_suite("default", cfg);
    c.expect(render(a) == render(b), "two default runs differ byte-wise");
}

TEST_CASE("criterion 8: full suite runtime") {
    Criterion c(8, "runtime-budget");
    SuiteConfig cfg = SuiteConfig::defaults();
    const auto t0 = std::chrono::steady_clock::now();
    auto records = run_suite("default", cfg, /*threads=*/1);
    const double secs = seconds_since(t0);
    c.expect(!records.empty(), "default suite produced no records");
    c.expect(!any_fail(records), "default suite has FAIL records");
    c.expect(secs < 300.0, "runtime " + std::to_string(secs) + "s exceeds 5min");
}
