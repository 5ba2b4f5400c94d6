#include "efstein/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "efstein/calculus.hpp"
#include "efstein/decomposition.hpp"
#include "efstein/generators.hpp"
#include "efstein/measure.hpp"
#include "efstein/operators.hpp"
#include "efstein/rng.hpp"
#include "efstein/version.hpp"
#include "efstein/walks.hpp"

namespace efstein {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<std::string> kReportClass = {
    "C14-influence-bounds",   "C16-hdx-hypercontractivity",
    "C17-fourier-concentration", "C18-small-set-expansion",
    "C19-kruskal-katona",     "C20-l4-closeness",
    "C21-derivative-family",
};

}  // namespace

SuiteConfig SuiteConfig::defaults() {
    SuiteConfig c;
    for (const auto& id : kReportClass) c.ceilings[id] = 1.0;
    return c;
}

void SuiteConfig::validate() const {
    for (const auto& id : kReportClass)
        if (!ceilings.count(id))
            throw Error("config lacks a ceiling entry for REPORT-class check " + id);
}

std::string SuiteConfig::canonical_string() const {
    std::string s = "v" + std::to_string(version);
    s += ";tol_exact=" + fmt(tol_exact) + ";tol_hard=" + fmt(tol_hard);
    s += ";ceil=";
    for (const auto& [k, v] : ceilings) s += k + ":" + fmt(v) + ",";
    auto grid = [&](const char* name, const auto& xs) {
        s += std::string(";") + name + "=";
        for (const auto& x : xs) s += fmt(double(x)) + ",";
    };
    grid("eta", eta_grid);
    grid("gamma", gamma_grid);
    grid("rho", rho_grid);
    grid("seeds", seeds);
    s += ";max_degree=" + std::to_string(max_degree);
    s += ";sse_rho=" + fmt(sse_rho) + ";kk_zeta=" + fmt(kk_zeta);
    s += ";neg_delta=" + fmt(negative_delta_ref) + ";neg_zeta=" + fmt(negative_zeta_ref);
    return s;
}

std::uint64_t SuiteConfig::hash() const { return fnv1a(canonical_string()); }

double SuiteConfig::effective_ceiling(const std::string& check_id, int k) const {
    auto it = ceilings.find(check_id);
    const double mult = it == ceilings.end() ? 1.0 : it->second;
    return mult * std::ldexp(1.0, 10 * k);
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"C1-reconstruction", "exact",
         "f = sum_S lift(f^{=S}) and A_S f = sum_{T subseteq S} f^{=T}"},
        {"C2-laplacian-equivalence", "exact",
         "alternating-average Laplacian equals sum_{T supseteq S} lift(f^{=T})"},
        {"C3-noise-equivalence", "exact",
         "binomial noise average equals sum_S rho^{|S|} lift(f^{=S})"},
        {"C4-updown-equivalence", "exact",
         "coordinate-resample walk equals sum_S ((k-|S|)/k) lift(f^{=S})"},
        {"C5-contraction", "hard",
         "||A_{S,T} f||_p <= ||f||_p (p in 2,4,inf) and ||f^{=S}||_2 <= 2^{|S|} ||f||_2"},
        {"C6-disjoint-averaging", "hard",
         "||A_{S,T} f - E f||_2^2 <= |S||T| eps^2 ||f||_2^2 for disjoint S,T"},
        {"C7-composition", "hard",
         "||A_{T2} A_{T1} f - A_{T1 cap T2} f||_2 <= |T1||T2| eps ||f||_2"},
        {"C8-near-orthogonality", "hard",
         "<f^{=S}, g^{=T}> <= 2^{2|S|+2|T|} eps ||f||_2 ||g||_2 for S != T"},
        {"C9-approx-parseval", "hard",
         "|<f,g> - sum_S <f^{=S},g^{=S}>| <= 2^{4k} eps ||f||_2 ||g||_2 (2^{4|T|} for T-juntas)"},
        {"C10-idempotence", "hard",
         "||(f^{=S})^{=T}||^2 <= 2^{8k} eps^2 ||f||^2; ||(f^{=S})^{=S}-f^{=S}||^2 <= 2^{10k} eps^2 ||f||^2"},
        {"C11-junta-orthogonality", "hard",
         "<f^{=S}, g> <= eps sqrt(|S||T|) 2^{|S|} ||f||_2 ||g||_2 for T-juntas g, S not in T"},
        {"C12-strong-parseval", "hard",
         "|<f,g> - sum_S <f_S,g_S>| <= 2^{6k} (eps1 a2 + eps2 a1 + eps a1 a2)"},
        {"C13-global-component-bound", "hard",
         "||f^{=T}||_inf <= 2^{|T|} delta for (d,delta)-global f, |T| <= d"},
        {"C14-influence-bounds", "residual",
         "E[I^2] <= 2^{d+1} delta^2 E[I] and E[(I^{<=d})^2] <= 2^{d+4} delta^2 E[I^{<=d}]"},
        {"C15-product-hypercontractivity", "hard",
         "on products: ||f||_4^4 <= 2*9^d sum (9d)^{|T|} E[I^2]; sum_S E[I] <= 2^d ||f||_2^2; "
         "||f||_4^4 <= delta 2000^d ||f||_2^2; cube: ||f||_4 <= 3^{d/2} ||f||_2"},
        {"C16-hdx-hypercontractivity", "residual",
         "||f^{<=d}||_4^4 <= 20^d sum (4d)^{|S|} E[(I^{<=d})^2] (+ 20^{d+1} and (100d)^d delta^2 forms, "
         "and the inductive 9^d ||f^{<=d}||_2^4 lemma)"},
        {"C17-fourier-concentration", "residual",
         "||f^{<=d}||_2^2 <= (200d)^d delta^{1/2} ||f||_2^2 for global Boolean f"},
        {"C18-small-set-expansion", "residual",
         "||T_rho f||_2^2 <= (rho^d + (100d)^d delta^2) ||f||_2^2 for global Boolean f"},
        {"C19-kruskal-katona", "residual",
         "down-mass of shadow(A) >= mu(A) (1 + d/(2k)); walk identity <f-Tf,f> <= shadow - mu(A)"},
        {"C20-l4-closeness", "residual",
         "L4 closeness of two bounded approximate decompositions of the same f (4 parts)"},
        {"C21-derivative-family", "residual",
         "{(D_{T,x} f)^{=S\\T}} is an approximate decomposition of L_T f with eps' = O_k(eps ||f||_2)"},
    };
    return entries;
}

std::vector<std::string> suite_names() {
    return {"exact-identities", "product-oracle", "eps-sweep",
            "residual-tracking", "applications", "default"};
}

// ===========================================================================
// Suite machinery

namespace {

using Records = std::vector<CheckRecord>;
using Task = std::function<Records()>;

Records run_tasks(std::vector<Task> tasks, int threads) {
    std::vector<Records> slots(tasks.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) slots[i] = tasks[i]();
    } else {
        std::atomic<std::size_t> next{0};
        const int n = std::min<int>(threads, int(tasks.size()));
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (int t = 0; t < n; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size();
                     i = next.fetch_add(1))
                    slots[i] = tasks[i]();
            });
        for (auto& th : pool) th.join();
    }
    Records out;
    for (auto& s : slots) out.insert(out.end(), std::make_move_iterator(s.begin()),
                                     std::make_move_iterator(s.end()));
    return out;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t0)
            .count();
    }
};

/// Runs `body` appending records to rs, then stamps the elapsed time
/// evenly over the appended records.
void timed(Records& rs, const std::function<void(Records&)>& body) {
    const std::size_t from = rs.size();
    Timer t;
    body(rs);
    const double per = rs.size() > from ? t.ms() / double(rs.size() - from) : 0.0;
    for (std::size_t i = from; i < rs.size(); ++i) rs[i].runtime_ms = per;
}

CheckRecord exact_record(std::string id, std::string instance, double rel_residual,
                         double tol, std::string note = {}) {
    CheckRecord r;
    r.check_id = std::move(id);
    r.instance = std::move(instance);
    r.lhs = rel_residual;
    r.rhs_explicit = tol;
    r.residual = rel_residual - tol;
    r.status = rel_residual <= tol ? CheckStatus::Pass : CheckStatus::Fail;
    r.note = std::move(note);
    return r;
}

std::vector<int> sizes_for(int k) {
    switch (k) {
        case 2: return {2, 3};
        case 3: return {3, 2, 3};
        case 4: return {4, 3, 3, 2};
        default: return {4, 3, 3, 2, 2};
    }
}

Fn gen_random_home(const ComplexPtr& mu, Subset s, std::uint64_t seed) {
    SplitRng rng(seed, 0x686F6D65);  // "home"
    SplitRng r = rng.split(s.bits());
    const int n = mu->marginal(s).size();
    std::vector<double> v(std::size_t(n), 0.0);
    for (double& x : v) x = r.symmetric();
    return Fn(mu, s, std::move(v));
}

double sq(double x) { return x * x; }
double pow4(double x) { return sq(sq(x)); }

// ---------------------------------------------------------------------------
// exact-identities: C1-C4 on seeded (measure, function) pairs.

Records exact_identities_pairs(const ComplexPtr& mu, const Fn& f, std::string instance,
                               const SuiteConfig& cfg) {
    Records rs;
    timed(rs, [&](Records& out) {
        const int k = mu->part_count();
        const double denom = std::max(norm_2(f), 1.0);
        EfronSteinFamily fam = es_all(f);

        double worst1 = 0.0;
        {
            Fn rec = low_degree(fam, k);
            Fn diff = rec - f;
            worst1 = norm_2(diff) / denom;
            for (Subset s : all_subsets(k)) {
                Fn lhs = avg(f, s);
                Fn sum = Fn::constant(mu, s, 0.0);
                for (Subset t : subsets_of(s)) sum += embed(fam.at(t), s);
                Fn d = lhs - sum;
                worst1 = std::max(worst1, norm_2(d) / denom);
            }
        }
        out.push_back(exact_record("C1-reconstruction", instance, worst1, cfg.tol_exact));

        double worst2 = 0.0;
        for (Subset s : all_subsets(k)) {
            Fn alt = laplacian(f, s);
            Fn sum = Fn::constant(mu, f.home(), 0.0);
            for (Subset t : all_subsets(k))
                if (s.subset_of(t)) sum += lift(fam.at(t));
            Fn d = alt - sum;
            worst2 = std::max(worst2, norm_2(d) / denom);
        }
        out.push_back(
            exact_record("C2-laplacian-equivalence", instance, worst2, cfg.tol_exact));

        double worst3 = 0.0;
        std::vector<double> rhos = {0.0, 1.0};
        rhos.insert(rhos.end(), cfg.rho_grid.begin(), cfg.rho_grid.end());
        for (double rho : rhos) {
            Fn a = noise_direct(f, rho);
            Fn b = noise_spectral(f, rho);
            Fn d = a - b;
            worst3 = std::max(worst3, norm_2(d) / denom);
        }
        out.push_back(exact_record("C3-noise-equivalence", instance, worst3, cfg.tol_exact));

        Fn a = updown(f);
        Fn b = updown_spectral(f);
        Fn d = a - b;
        out.push_back(exact_record("C4-updown-equivalence", instance, norm_2(d) / denom,
                                   cfg.tol_exact));
    });
    return rs;
}

Records suite_exact_identities(const SuiteConfig& cfg, int threads) {
    std::vector<std::pair<GenSpec, std::string>> measures;
    for (int k = 2; k <= 5; ++k)
        for (std::uint64_t seed : cfg.seeds) {
            GenSpec g{GenSpec::Kind::Product, sizes_for(k), 0, 0, 1, seed};
            measures.emplace_back(g, g.tag());
        }
    for (double eta : cfg.eta_grid) {
        GenSpec g{GenSpec::Kind::EtaCorrelated, {2, 2}, eta, 0, 1, 0};
        measures.emplace_back(g, g.tag());
    }
    for (double gamma : cfg.gamma_grid) {
        GenSpec g{GenSpec::Kind::PerturbedProduct, {3, 3, 3}, 0, gamma, 1, cfg.seeds[0]};
        measures.emplace_back(g, g.tag());
    }
    for (std::uint64_t seed : {cfg.seeds[0], cfg.seeds[0] + 1}) {
        GenSpec g{GenSpec::Kind::SparseRandom, {4, 4, 4}, 0, 0, 0.6, seed};
        measures.emplace_back(g, g.tag());
    }
    {
        GenSpec g{GenSpec::Kind::SparseRandom, {3, 4, 3, 4}, 0, 0, 0.5, cfg.seeds[0]};
        measures.emplace_back(g, g.tag());
    }

    std::vector<Task> tasks;
    for (const auto& [spec, tag] : measures) {
        tasks.push_back([spec = spec, tag = tag, &cfg]() {
            ComplexPtr mu = generate(spec);
            const int k = mu->part_count();
            Records rs;
            FnSpec dense{FnSpec::Kind::RandomLowDegree, 0, 0, k, 0, 1, 0, spec.seed + 17};
            std::vector<std::pair<Fn, std::string>> fns;
            fns.emplace_back(gen_random_dense(mu, spec.seed + 7), "dense(seed=" +
                                                                      std::to_string(spec.seed + 7) + ")");
            FnSpec dict{FnSpec::Kind::Dictator, 0, 0, 0, 0, 1, 0, 0};
            fns.emplace_back(gen_function(mu, dict), dict.tag());
            FnSpec rld{FnSpec::Kind::RandomLowDegree, 0, 0, std::min(2, k), 0, 1, 0,
                       spec.seed + 29};
            fns.emplace_back(gen_function(mu, rld), rld.tag());
            for (const auto& [f, ftag] : fns) {
                Records part = exact_identities_pairs(mu, f, tag + ";" + ftag, cfg);
                rs.insert(rs.end(), part.begin(), part.end());
            }
            return rs;
        });
    }
    return run_tasks(std::move(tasks), threads);
}

// ---------------------------------------------------------------------------
// product-oracle: the eps = 0 theory, hard end to end.

Records product_oracle_instance(const ComplexPtr& mu, const std::string& mtag, int d,
                                std::uint64_t seed, bool cube, const SuiteConfig& cfg) {
    Records rs;
    timed(rs, [&](Records& out) {
        const int k = mu->part_count();
        FnSpec rld{FnSpec::Kind::RandomLowDegree, 0, 0, d, 0, 1, 0, seed};
        Fn f = gen_function(mu, rld);
        const std::string instance = mtag + ";" + rld.tag();
        EfronSteinFamily fam = es_all(f);

        // pairwise orthogonality of the components
        double worst = 0.0;
        for (Subset s : all_subsets(k))
            for (Subset t : all_subsets(k)) {
                if (t.bits() <= s.bits()) continue;
                worst = std::max(worst, std::abs(inner(lift(fam.at(s)), lift(fam.at(t)))));
            }
        out.push_back(exact_record("C8-near-orthogonality", instance, worst, 1e-10,
                                   "product orthogonality"));

        // exact Parseval against an independent dense g
        Fn g = gen_random_dense(mu, seed + 101);
        out.push_back(exact_record("C9-approx-parseval", instance,
                                   parseval_defect(f, g), 1e-10, "product Parseval"));

        const double n2 = inner(f, f);
        // sum of influences of a degree-d function
        {
            std::vector<double> terms;
            for (Subset s : all_subsets(k)) {
                Fn l = laplacian(f, s);
                terms.push_back(inner(l, l));
            }
            CheckRecord r = hard_record("C15-product-hypercontractivity", instance,
                                        pairwise_sum(terms), std::ldexp(n2, d));
            r.note = "sum_S E[I_S] <= 2^d ||f||_2^2";
            out.push_back(std::move(r));
        }
        // hypercontractivity with explicit constants, and its global corollary
        {
            std::vector<double> terms;
            double max_infl = 0.0;
            for (Subset s : all_subsets(k)) {
                if (s.size() > d) continue;
                InfluenceProfile p = influence_profile(f, s, d);
                terms.push_back(std::pow(9.0 * d, s.size()) * p.mean_sq);
                max_infl = std::max(max_infl, p.max);
            }
            const double lhs = pow4(norm_4(f));
            CheckRecord r = hard_record("C15-product-hypercontractivity", instance, lhs,
                                        2.0 * std::pow(9.0, d) * pairwise_sum(terms));
            r.note = "||f||_4^4 <= 2*9^d sum_{|T|<=d} (9d)^{|T|} E[I^2]";
            out.push_back(std::move(r));

            CheckRecord c = hard_record("C15-product-hypercontractivity", instance, lhs,
                                        max_infl * std::pow(2000.0, d) * n2);
            c.note = "||f||_4^4 <= delta 2000^d ||f||_2^2, delta = max I";
            out.push_back(std::move(c));
        }
        if (cube) {
            CheckRecord r = hard_record("C15-product-hypercontractivity", instance,
                                        norm_4(f), std::pow(3.0, 0.5 * d) * norm_2(f));
            r.note = "Bonami on the uniform cube";
            out.push_back(std::move(r));
        }
    });
    return rs;
}

Records suite_product_oracle(const SuiteConfig& cfg, int threads) {
    struct Inst {
        GenSpec spec;
        bool cube;
    };
    std::vector<Inst> instances;
    for (int k = 2; k <= 5; ++k) {
        GenSpec uniform{GenSpec::Kind::SparseRandom, sizes_for(k), 0, 0, 1.0, 0};
        instances.push_back({uniform, false});  // density 1 keeps every face, uniform
        GenSpec seeded{GenSpec::Kind::Product, sizes_for(k), 0, 0, 1, cfg.seeds[0]};
        instances.push_back({seeded, false});
    }
    for (int k = 3; k <= 5; ++k) {
        GenSpec cube{GenSpec::Kind::SparseRandom, std::vector<int>(k, 2), 0, 0, 1.0, 0};
        instances.push_back({cube, true});
    }

    std::vector<Task> tasks;
    for (const auto& inst : instances) {
        tasks.push_back([inst, &cfg]() {
            ComplexPtr mu = generate(inst.spec);
            Records rs;
            const int k = mu->part_count();
            for (int d = 1; d <= std::min(k, cfg.max_degree); ++d) {
                Records part = product_oracle_instance(mu, inst.spec.tag(), d,
                                                       cfg.seeds[0] + 13 * d, inst.cube, cfg);
                rs.insert(rs.end(), part.begin(), part.end());
            }
            return rs;
        });
    }
    return run_tasks(std::move(tasks), threads);
}

// ---------------------------------------------------------------------------
// eps-sweep: explicit-constant checks C5-C13 with a certified epsilon.

Records eps_sweep_instance(const GenSpec& spec, const SuiteConfig& cfg) {
    Records rs;
    timed(rs, [&](Records& out) {
        ComplexPtr mu = generate(spec);
        const int k = mu->part_count();
        const std::string mtag = spec.tag();
        const double eps = certify_epsilon(mu).epsilon;
        const std::string instance = mtag + ";eps=" + fmt(eps);

        Fn f = gen_random_dense(mu, spec.seed + 3);
        Fn g = gen_random_dense(mu, spec.seed + 5);
        EfronSteinFamily ff = es_all(f);
        EfronSteinFamily gg = es_all(g);
        const double f2 = norm_2(f), g2 = norm_2(g);

        // C5: operator and component contraction
        {
            double m2 = -1e300, m4 = -1e300, mi = -1e300;
            CheckRecord r2, r4, ri;
            for (Subset s : all_subsets(k)) {
                Fn h = gen_random_home(mu, s, spec.seed + 11);
                const double h2 = norm_2(h), h4 = norm_4(h), hi = norm_inf(h);
                for (Subset t : all_subsets(k)) {
                    Fn a = avg(h, t);
                    auto upd = [&](double lhs, double rhs, double& worst, CheckRecord& rec,
                                   const char* what) {
                        if (lhs - rhs > worst) {
                            worst = lhs - rhs;
                            rec = hard_record("C5-contraction", instance, lhs, rhs);
                            rec.note = std::string(what) + " S=" + s.to_string() +
                                       " T=" + t.to_string();
                        }
                    };
                    upd(norm_2(a), h2, m2, r2, "2-norm");
                    upd(norm_4(a), h4, m4, r4, "4-norm");
                    upd(norm_inf(a), hi, mi, ri, "inf-norm");
                }
            }
            out.push_back(r2);
            out.push_back(r4);
            out.push_back(ri);

            double worst = -1e300;
            CheckRecord rc;
            for (Subset s : all_subsets(k)) {
                const double lhs = norm_2(ff.at(s));
                const double rhs = std::ldexp(f2, s.size());
                if (lhs - rhs > worst) {
                    worst = lhs - rhs;
                    rc = hard_record("C5-contraction", instance, lhs, rhs);
                    rc.note = "||f^{=S}||_2 <= 2^{|S|} ||f||_2, S=" + s.to_string();
                }
            }
            out.push_back(rc);
        }

        // C6: disjoint averaging on random home-S functions
        {
            double worst = -1e300;
            CheckRecord rec;
            for (Subset s : all_subsets(k))
                for (Subset t : all_subsets(k)) {
                    if (!(s & t).is_empty()) continue;
                    Fn h = gen_random_home(mu, s, spec.seed + 23);
                    CheckRecord r = check_disjoint_avg(h, t, eps, instance);
                    if (r.residual > worst) {
                        worst = r.residual;
                        rec = std::move(r);
                    }
                }
            out.push_back(rec);
        }

        // C7: composition
        {
            double worst = -1e300;
            CheckRecord rec;
            for (Subset t1 : all_subsets(k))
                for (Subset t2 : all_subsets(k)) {
                    CheckRecord r = check_composition(f, t1, t2, eps, instance);
                    if (r.residual > worst) {
                        worst = r.residual;
                        rec = std::move(r);
                    }
                }
            out.push_back(rec);
        }

        // C8: near orthogonality of components
        {
            double worst = -1e300;
            CheckRecord rec;
            for (Subset s : all_subsets(k))
                for (Subset t : all_subsets(k)) {
                    if (s == t) continue;
                    const double lhs = std::abs(inner(lift(ff.at(s)), lift(gg.at(t))));
                    const double rhs =
                        std::ldexp(eps * f2 * g2, 2 * s.size() + 2 * t.size());
                    if (lhs - rhs > worst) {
                        worst = lhs - rhs;
                        rec = hard_record("C8-near-orthogonality", instance, lhs, rhs);
                        rec.note = "S=" + s.to_string() + " T=" + t.to_string();
                    }
                }
            out.push_back(rec);
        }

        // C9: approximate Parseval, full and junta form
        {
            CheckRecord r = hard_record("C9-approx-parseval", instance,
                                        parseval_defect(f, g),
                                        std::ldexp(eps * f2 * g2, 4 * k));
            r.note = "2^{4k} eps ||f|| ||g||";
            out.push_back(std::move(r));

            const Subset t0 = k >= 3 ? Subset(0b11) : Subset(0b1);
            Fn fj = lift(gen_random_home(mu, t0, spec.seed + 31));
            EfronSteinFamily fjf = es_all(fj);
            std::vector<double> terms;
            for (Subset s : subsets_of(t0)) terms.push_back(inner(fjf.at(s), gg.at(s)));
            const double defect = std::abs(inner(fj, g) - pairwise_sum(terms));
            CheckRecord rj = hard_record(
                "C9-approx-parseval", instance, defect,
                std::ldexp(eps * norm_2(fj) * g2, 4 * t0.size()));
            rj.note = "junta form, T=" + t0.to_string();
            out.push_back(std::move(rj));
        }

        // C10: near idempotence
        {
            double worst_off = -1e300, worst_diag = -1e300;
            CheckRecord ro, rd;
            for (Subset s : all_subsets(k)) {
                Fn comp = ff.at(s);
                Fn lifted = lift(comp);
                EfronSteinFamily gfam = es_all(lifted);
                for (Subset t : all_subsets(k)) {
                    if (t == s) {
                        Fn d = gfam.at(t) - comp;
                        const double lhs = inner(d, d);
                        const double rhs = std::ldexp(eps * eps * f2 * f2, 10 * k);
                        if (lhs - rhs > worst_diag) {
                            worst_diag = lhs - rhs;
                            rd = hard_record("C10-idempotence", instance, lhs, rhs);
                            rd.note = "||(f^{=S})^{=S} - f^{=S}||^2, S=" + s.to_string();
                        }
                    } else {
                        const Fn& gt = gfam.at(t);
                        const double lhs = inner(gt, gt);
                        const double rhs = std::ldexp(eps * eps * f2 * f2, 8 * k);
                        if (lhs - rhs > worst_off) {
                            worst_off = lhs - rhs;
                            ro = hard_record("C10-idempotence", instance, lhs, rhs);
                            ro.note = "||(f^{=S})^{=T}||^2, S=" + s.to_string() +
                                      " T=" + t.to_string();
                        }
                    }
                }
            }
            out.push_back(ro);
            out.push_back(rd);
        }

        // C11: components against juntas
        {
            double worst = -1e300;
            CheckRecord rec;
            for (Subset t0 : {Subset(0b1), Subset(0b11)}) {
                if (!t0.subset_of(Subset::full(k))) continue;
                Fn gj = lift(gen_random_home(mu, t0, spec.seed + 41));
                const double gj2 = norm_2(gj);
                for (Subset s : all_subsets(k)) {
                    if (s.is_empty() || s.subset_of(t0)) continue;
                    const double lhs = std::abs(inner(lift(ff.at(s)), gj));
                    const double rhs = eps * std::sqrt(double(s.size()) * t0.size()) *
                                       std::ldexp(f2 * gj2, s.size());
                    if (lhs - rhs > worst) {
                        worst = lhs - rhs;
                        rec = hard_record("C11-junta-orthogonality", instance, lhs, rhs);
                        rec.note = "S=" + s.to_string() + " T=" + t0.to_string();
                    }
                }
            }
            out.push_back(rec);
        }

        // C12: strong Parseval for exact and perturbed witnesses
        {
            auto exact_witness = [&](const Fn& fn, const EfronSteinFamily& fam) {
                ApproxESWitness w{EfronSteinFamily(mu->id()), {}, 0, 0, std::nullopt};
                for (const auto& [bits, comp] : fam.components()) {
                    w.family.set(Subset(bits), comp);
                    w.witnesses.emplace(bits, fn);
                }
                WitnessBounds b = validate_approx_es(fn, w);
                w.alpha = b.alpha_min;
                w.eps_prime = b.eps_prime_min;
                w.beta = b.beta_min;
                return w;
            };
            ApproxESWitness wf = exact_witness(f, ff);
            ApproxESWitness wg = exact_witness(g, gg);
            const double bound = std::ldexp(
                wf.eps_prime * wg.alpha + wg.eps_prime * wf.alpha + eps * wf.alpha * wg.alpha,
                6 * k);
            CheckRecord r = hard_record("C12-strong-parseval", instance,
                                        strong_parseval_defect(f, g, wf, wg), bound);
            r.note = "exact families";
            out.push_back(std::move(r));

            // perturb the f-family by zeta * noise
            ApproxESWitness wp = wf;
            SplitRng noise(spec.seed + 53, 0x7A657461);
            const double zeta = 0.01;
            EfronSteinFamily pf(mu->id());
            for (const auto& [bits, comp] : wf.family.components()) {
                Fn c = comp;
                auto& vals = c.mutable_values();
                SplitRng rr = noise.split(bits);
                for (double& v : vals) v += zeta * rr.symmetric();
                pf.set(Subset(bits), std::move(c));
            }
            wp.family = std::move(pf);
            WitnessBounds pb = validate_approx_es(f, wp);
            wp.alpha = pb.alpha_min;
            wp.eps_prime = pb.eps_prime_min;
            wp.beta = pb.beta_min;
            const double pbound = std::ldexp(
                wp.eps_prime * wg.alpha + wg.eps_prime * wp.alpha + eps * wp.alpha * wg.alpha,
                6 * k);
            CheckRecord rp = hard_record("C12-strong-parseval", instance,
                                         strong_parseval_defect(f, g, wp, wg), pbound);
            rp.note = "perturbed family, zeta=" + fmt(zeta);
            out.push_back(std::move(rp));
        }

        // C13 (+C14): globalness consequences on a random Boolean function
        {
            FnSpec bs{FnSpec::Kind::RandomBoolean, 0, 0, 0, 0.3, 1, 0, spec.seed + 61};
            Fn fb = gen_function(mu, bs);
            const int d = std::min(2, k - 1);
            const double delta = globalness(fb, d).delta_min;
            Records gb = check_global_bounds(fb, d, delta, eps,
                                             instance + ";" + bs.tag() + ";d=" +
                                                 std::to_string(d));
            out.insert(out.end(), gb.begin(), gb.end());
        }
    });
    return rs;
}

Records suite_eps_sweep(const SuiteConfig& cfg, int threads) {
    std::vector<GenSpec> specs;
    for (double eta : cfg.eta_grid)
        specs.push_back({GenSpec::Kind::EtaCorrelated, {2, 2}, eta, 0, 1, 0});
    for (double gamma : cfg.gamma_grid)
        specs.push_back(
            {GenSpec::Kind::PerturbedProduct, {3, 3, 3}, 0, gamma, 1, cfg.seeds[0]});
    specs.push_back(
        {GenSpec::Kind::PerturbedProduct, {3, 2, 3, 2}, 0, 0.05, 1, cfg.seeds[0]});
    specs.push_back(
        {GenSpec::Kind::PerturbedProduct, {4, 3, 3, 2, 2}, 0, 0.05, 1, cfg.seeds[0]});
    specs.push_back({GenSpec::Kind::SparseRandom, {3, 3, 3}, 0, 0, 0.5, cfg.seeds[0]});

    std::vector<Task> tasks;
    for (const auto& spec : specs)
        tasks.push_back([spec, &cfg]() { return eps_sweep_instance(spec, cfg); });
    return run_tasks(std::move(tasks), threads);
}

// ---------------------------------------------------------------------------
// residual-tracking: C14, C16, C20, C21 across the eta/gamma sweep.

Records residual_instance(const GenSpec& spec, const SuiteConfig& cfg) {
    Records rs;
    timed(rs, [&](Records& out) {
        ComplexPtr mu = generate(spec);
        const int k = mu->part_count();
        const double eps = certify_epsilon(mu).epsilon;
        const std::string mtag =
            "k=" + std::to_string(k) + ";" + spec.tag() + ";eps=" + fmt(eps);

        FnSpec bs{FnSpec::Kind::RandomBoolean, 0, 0, 0, 0.3, 1, 0, spec.seed + 7};
        Fn fb = gen_function(mu, bs);
        Fn fr = gen_random_dense(mu, spec.seed + 9);

        std::vector<int> degrees = {1};
        if (k >= 3) degrees.push_back(2);

        auto hyper_records = [&](const Fn& f, const std::string& ftag, int d,
                                 bool with_global) {
            const std::string instance = mtag + ";" + ftag + ";d=" + std::to_string(d);
            EfronSteinFamily fam = es_all(f);
            Fn fd = low_degree(fam, d);
            const double fd2 = inner(fd, fd);
            const double fd4 = pow4(norm_4(fd));
            const double f2 = inner(f, f);
            const double finf2 = sq(norm_inf(f));

            std::vector<double> sum_terms;
            for (Subset s : all_subsets(k)) {
                if (s.size() > d) continue;
                InfluenceProfile p = influence_profile(f, s, d);
                sum_terms.push_back(std::pow(4.0 * d, s.size()) * p.mean_sq_trunc);
            }
            const double infl_sum = pairwise_sum(sum_terms);

            {
                std::vector<double> lap_terms;
                for (Subset t : all_subsets(k)) {
                    if (t.is_empty() || t.size() > d) continue;
                    lap_terms.push_back(std::pow(4.0 * d, t.size()) *
                                        pow4(norm_4(laplacian_trunc(f, t, d))));
                }
                CheckRecord r = residual_record(
                    "C16-hdx-hypercontractivity", instance, 0.5 * fd4,
                    std::pow(9.0, d) * sq(fd2) + 4.0 * pairwise_sum(lap_terms),
                    eps * f2 * finf2);
                r.note = "inductive lemma";
                out.push_back(std::move(r));
            }
            {
                CheckRecord r = residual_record("C16-hdx-hypercontractivity", instance, fd4,
                                                std::pow(20.0, d) * infl_sum,
                                                eps * eps * f2 * finf2);
                r.note = "main 20^d form";
                out.push_back(std::move(r));
            }
            if (with_global) {
                const double delta = globalness(f, d).delta_min;
                {
                    CheckRecord r = residual_record(
                        "C16-hdx-hypercontractivity", instance, fd4,
                        std::pow(20.0, d + 1) * infl_sum, eps * eps * delta * delta * f2);
                    r.note = "20^{d+1} form, delta=" + fmt(delta);
                    out.push_back(std::move(r));
                }
                {
                    CheckRecord r = residual_record(
                        "C16-hdx-hypercontractivity", instance, fd4,
                        std::pow(100.0 * d, d) * delta * delta * fd2,
                        eps * eps * delta * delta * f2);
                    r.note = "(100d)^d delta^2 form, delta=" + fmt(delta);
                    out.push_back(std::move(r));
                }
                Records gb = check_global_bounds(f, d, delta, eps, instance);
                out.insert(out.end(), gb.begin(), gb.end());
            }
        };

        for (int d : degrees) {
            hyper_records(fb, bs.tag(), d, true);
            hyper_records(fr, "dense", d, false);
        }

        // C20/C21: the two decompositions of L_T f
        const Subset t = Subset::single(0);
        Fn lap = laplacian(fr, t);
        ApproxESWitness w2 = derivative_es_family(fr, t);

        ApproxESWitness w1{EfronSteinFamily(mu->id()), {}, 0, 0, std::nullopt};
        {
            EfronSteinFamily fam = es_all(fr);
            for (Subset s : all_subsets(k)) {
                if (!t.subset_of(s)) continue;
                w1.family.set(s, fam.at(s));
                w1.witnesses.emplace(s.bits(), fr);
            }
            WitnessBounds b = validate_approx_es(lap, w1);
            w1.alpha = b.alpha_min;
            w1.eps_prime = b.eps_prime_min;
            w1.beta = b.beta_min;
        }

        const std::string inst20 = mtag + ";dense;T=" + t.to_string();
        const double ceiling = cfg.effective_ceiling("C20-l4-closeness", k);
        Subset s_probe = k >= 2 ? Subset(0b11) : t;
        L4Closeness l4 = l4_closeness_defect(lap, w1, w2, s_probe, eps, ceiling);
        for (int part = 0; part < 4; ++part) {
            CheckRecord r = residual_record("C20-l4-closeness", inst20, l4.lhs[part], 0.0,
                                            l4.rhs_shape[part] / ceiling);
            r.note = "part " + std::to_string(part + 1);
            out.push_back(std::move(r));
        }

        {
            const std::string inst21 = mtag + ";dense;T=" + t.to_string();
            CheckRecord r = residual_record("C21-derivative-family", inst21, w2.eps_prime,
                                            0.0, eps * norm_2(fr));
            r.note = "eps' vs eps ||f||_2";
            out.push_back(std::move(r));
            CheckRecord ra = residual_record("C21-derivative-family", inst21, w2.alpha, 0.0,
                                             norm_2(fr));
            ra.note = "alpha vs ||f||_2";
            out.push_back(std::move(ra));
            CheckRecord rb = residual_record("C21-derivative-family", inst21,
                                             w2.beta.value_or(0.0), 0.0, norm_inf(fr));
            rb.note = "beta vs ||f||_inf";
            out.push_back(std::move(rb));
        }
    });
    return rs;
}

Records suite_residual_tracking(const SuiteConfig& cfg, int threads) {
    std::vector<GenSpec> specs;
    specs.push_back({GenSpec::Kind::EtaCorrelated, {2, 2}, 0.0, 0, 1, 0});
    for (double eta : cfg.eta_grid)
        specs.push_back({GenSpec::Kind::EtaCorrelated, {2, 2}, eta, 0, 1, 0});
    specs.push_back({GenSpec::Kind::PerturbedProduct, {3, 3, 3}, 0, 0.0, 1, cfg.seeds[0]});
    for (double gamma : cfg.gamma_grid)
        specs.push_back(
            {GenSpec::Kind::PerturbedProduct, {3, 3, 3}, 0, gamma, 1, cfg.seeds[0]});
    specs.push_back(
        {GenSpec::Kind::PerturbedProduct, {3, 2, 3, 2}, 0, 0.05, 1, cfg.seeds[0]});

    std::vector<Task> tasks;
    for (const auto& spec : specs)
        tasks.push_back([spec, &cfg]() { return residual_instance(spec, cfg); });
    return run_tasks(std::move(tasks), threads);
}

// ---------------------------------------------------------------------------
// applications: C17, C18 (with the dictator negative control) and C19.

Records applications_global_set(const GenSpec& spec, double p, std::uint64_t seed,
                                const SuiteConfig& cfg) {
    Records rs;
    timed(rs, [&](Records& out) {
        ComplexPtr mu = generate(spec);
        const int d = 1;
        const double eps = certify_epsilon(mu).epsilon;
        FnSpec gs{FnSpec::Kind::RandomGlobalSet, 0, 0, 0, p, d, 0, seed};
        Fn f = gen_function(mu, gs);
        const double delta = globalness(f, d).delta_min;
        const std::string instance =
            spec.tag() + ";" + gs.tag() + ";eps=" + fmt(eps) + ";delta=" + fmt(delta);

        EfronSteinFamily fam = es_all(f);
        Fn fd = low_degree(fam, d);
        const double n2 = inner(f, f);
        {
            CheckRecord r = residual_record(
                "C17-fourier-concentration", instance, inner(fd, fd),
                std::pow(200.0 * d, d) * std::sqrt(delta) * n2, std::sqrt(eps) * n2);
            out.push_back(std::move(r));
        }
        out.push_back(check_sse(f, cfg.sse_rho, d, delta, eps, instance));
        out.push_back(check_noise_bound(f, cfg.sse_rho, d, eps, instance));
    });
    return rs;
}

Records applications_negative_control(const SuiteConfig& cfg) {
    Records rs;
    timed(rs, [&](Records& out) {
        ComplexPtr mu = gen_product_uniform(std::vector<int>{2, 2});
        FnSpec dict{FnSpec::Kind::Dictator, 0, 1, 0, 0, 1, 0, 0};
        Fn f = gen_function(mu, dict);
        const std::string instance = "uniform[2x2];" + dict.tag();
        const double n2 = inner(f, f);

        // Dictators are not global (delta_min = 1) and must violate the
        // conclusions the theorems grant to global sets: records here PASS
        // exactly when the would-be bound falls below the measured value.
        {
            EfronSteinFamily fam = es_all(f);
            Fn fd = low_degree(fam, 1);
            CheckRecord r = hard_record("C17-fourier-concentration", instance,
                                        cfg.negative_zeta_ref * n2, inner(fd, fd));
            r.note = "negative control: ||f^{<=1}||_2^2 must exceed zeta_ref ||f||_2^2";
            out.push_back(std::move(r));
        }
        {
            const double bound =
                (cfg.sse_rho + 100.0 * sq(cfg.negative_delta_ref)) * n2;
            CheckRecord r = hard_record("C18-small-set-expansion", instance, bound,
                                        stability(f, cfg.sse_rho));
            r.note = "negative control: stability 5/16 must exceed the global bound at "
                     "delta_ref=" +
                     fmt(cfg.negative_delta_ref);
            out.push_back(std::move(r));
        }
    });
    return rs;
}

Records applications_kk_instance(std::uint64_t seed, const SuiteConfig& cfg) {
    Records rs;
    timed(rs, [&](Records& out) {
        const double zeta = cfg.kk_zeta;
        const std::vector<double> marginal = {1.0 - zeta, zeta / 3, zeta / 3, zeta / 3};
        ComplexPtr mu = gen_product({marginal, marginal, marginal, marginal});
        const double eps = certify_epsilon(mu).epsilon;

        // A lives among the all-light faces; only they carry mass small
        // enough for (1, 1/200)-globalness.
        const double q = 0.25 + 0.05 * double(seed % 5);
        SplitRng base(seed, 0x6B6B7374);  // "kkst"
        Fn f = Fn::constant(mu, Subset::full(4), 0.0);
        for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
            SplitRng rng = base.split(attempt);
            std::vector<double> v(std::size_t(mu->face_count()), 0.0);
            int count = 0;
            for (int z = 0; z < mu->face_count(); ++z) {
                auto face = mu->face(z);
                bool light = true;
                for (int i = 0; i < 4; ++i) light = light && face[i] >= 1;
                if (light && rng.coin(q)) {
                    v[z] = 1.0;
                    ++count;
                }
            }
            if (count > 0) {
                f = Fn(mu, Subset::full(4), std::move(v));
                break;
            }
        }
        const double delta = 1.0 / 200.0;
        const std::string instance = "kk-fixture[zeta=" + fmt(zeta) +
                                     ";q=" + fmt(q) + ";seed=" + std::to_string(seed) +
                                     "];eps=" + fmt(eps);
        Records recs = check_kk(f, 1, delta, eps, 1e-10, instance);
        out.insert(out.end(), recs.begin(), recs.end());
    });
    return rs;
}

Records suite_applications(const SuiteConfig& cfg, int threads) {
    std::vector<Task> tasks;
    const std::vector<std::pair<int, std::vector<int>>> shapes = {
        {3, {6, 6, 6}}, {4, {4, 4, 4, 4}}};
    for (const auto& [k, sizes] : shapes)
        for (double p : {0.05, 0.1})
            for (std::uint64_t seed : cfg.seeds) {
                GenSpec spec{GenSpec::Kind::SparseRandom, sizes, 0, 0, 1.0, 0};  // uniform
                tasks.push_back([spec, p, seed, &cfg]() {
                    return applications_global_set(spec, p, seed, cfg);
                });
            }
    // off-product REPORT coverage
    {
        GenSpec spec{GenSpec::Kind::PerturbedProduct, {4, 4, 4}, 0, 0.05, 1, cfg.seeds[0]};
        tasks.push_back([spec, &cfg]() {
            return applications_global_set(spec, 0.1, cfg.seeds[0], cfg);
        });
    }
    tasks.push_back([&cfg]() { return applications_negative_control(cfg); });
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
        tasks.push_back([seed, &cfg]() { return applications_kk_instance(seed, cfg); });
    return run_tasks(std::move(tasks), threads);
}

}  // namespace

// ===========================================================================

std::vector<CheckRecord> run_suite(const std::string& name, const SuiteConfig& config,
                                   int threads) {
    config.validate();
    if (name == "exact-identities") return suite_exact_identities(config, threads);
    if (name == "product-oracle") return suite_product_oracle(config, threads);
    if (name == "eps-sweep") return suite_eps_sweep(config, threads);
    if (name == "residual-tracking") return suite_residual_tracking(config, threads);
    if (name == "applications") return suite_applications(config, threads);
    if (name == "default") {
        std::vector<CheckRecord> all;
        for (const char* sub : {"exact-identities", "product-oracle", "eps-sweep",
                                "residual-tracking", "applications"}) {
            auto part = run_suite(sub, config, threads);
            all.insert(all.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
        }
        return all;
    }
    throw UnknownSuite("no suite named '" + name + "'");
}

bool any_fail(const std::vector<CheckRecord>& records) {
    return std::any_of(records.begin(), records.end(),
                       [](const CheckRecord& r) { return r.status == CheckStatus::Fail; });
}

namespace {

std::vector<const CheckRecord*> report_order(const std::vector<CheckRecord>& records) {
    std::vector<const CheckRecord*> ptrs;
    ptrs.reserve(records.size());
    for (const auto& r : records) ptrs.push_back(&r);
    std::stable_sort(ptrs.begin(), ptrs.end(), [](const CheckRecord* a, const CheckRecord* b) {
        const int fa = a->status == CheckStatus::Fail ? 0 : 1;
        const int fb = b->status == CheckStatus::Fail ? 0 : 1;
        if (fa != fb) return fa < fb;
        if (a->check_id != b->check_id) return a->check_id < b->check_id;
        if (a->instance != b->instance) return a->instance < b->instance;
        return a->note < b->note;
    });
    return ptrs;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_report(const std::vector<CheckRecord>& records, ReportFormat format,
                  std::ostream& out, const SuiteConfig* config, bool include_runtime) {
    const auto ptrs = report_order(records);

    switch (format) {
        case ReportFormat::Jsonl: {
            {
                ordered_json head;
                head["library"] = kLibraryVersion;
                if (config) head["config_hash"] = std::to_string(config->hash());
                head["records"] = records.size();
                out << head.dump() << "\n";
            }
            for (const CheckRecord* r : ptrs) {
                ordered_json j;
                j["check_id"] = r->check_id;
                j["instance"] = r->instance;
                j["lhs"] = r->lhs;
                j["rhs_explicit"] = r->rhs_explicit;
                j["residual"] = r->residual;
                if (r->residual_ratio)
                    j["residual_ratio"] = *r->residual_ratio;
                else
                    j["residual_ratio"] = nullptr;
                j["status"] = to_string(r->status);
                j["note"] = r->note;
                if (include_runtime) j["runtime_ms"] = r->runtime_ms;
                out << j.dump() << "\n";
            }
            break;
        }
        case ReportFormat::Csv: {
            out << "# library=" << kLibraryVersion;
            if (config) out << " config_hash=" << config->hash();
            out << "\n";
            out << "check_id,instance,lhs,rhs_explicit,residual,residual_ratio,status,note";
            if (include_runtime) out << ",runtime_ms";
            out << "\n";
            for (const CheckRecord* r : ptrs) {
                out << csv_escape(r->check_id) << "," << csv_escape(r->instance) << ","
                    << fmt(r->lhs) << "," << fmt(r->rhs_explicit) << "," << fmt(r->residual)
                    << "," << (r->residual_ratio ? fmt(*r->residual_ratio) : "") << ","
                    << to_string(r->status) << "," << csv_escape(r->note);
                if (include_runtime) out << "," << fmt(r->runtime_ms);
                out << "\n";
            }
            break;
        }
        case ReportFormat::Markdown: {
            out << "| check | instance | lhs | rhs | residual | ratio | status |\n";
            out << "|---|---|---|---|---|---|---|\n";
            for (const CheckRecord* r : ptrs) {
                out << "| " << r->check_id << " | " << r->instance << " | " << fmt(r->lhs)
                    << " | " << fmt(r->rhs_explicit) << " | " << fmt(r->residual) << " | "
                    << (r->residual_ratio ? fmt(*r->residual_ratio) : "-") << " | "
                    << to_string(r->status) << " |\n";
            }
            out << "\n";
            out << "library: " << kLibraryVersion;
            if (config) out << ", config hash: " << config->hash();
            out << "\n";
            break;
        }
    }
}

}  // namespace efstein
