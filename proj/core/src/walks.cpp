#include "efstein/walks.hpp"

#include <cmath>

#include "efstein/calculus.hpp"

namespace efstein {

namespace {

void require_full_home(const Fn& f) {
    if (f.home() != Subset::full(f.complex()->part_count()))
        throw DomainMismatch("operation expects a full-home function");
}

}  // namespace

Fn noise_direct(const Fn& f, double rho) {
    require_full_home(f);
    if (rho < 0.0 || rho > 1.0) throw DomainMismatch("rho must lie in [0,1]");
    const auto& cx = *f.complex();
    const int k = cx.part_count();
    const Marginal& mfull = cx.marginal(f.home());
    std::vector<double> v(mfull.size(), 0.0);
    for (Subset s : all_subsets(k)) {
        const double w =
            std::pow(rho, s.size()) * std::pow(1.0 - rho, k - s.size());
        if (w == 0.0) continue;
        Fn a = avg(f, s);
        const Marginal& ms = cx.marginal(s);
        for (int z = 0; z < mfull.size(); ++z) v[z] += w * a[ms.face_to_point[z]];
    }
    return Fn(f.complex(), f.home(), std::move(v));
}

Fn noise_spectral(const Fn& f, double rho) {
    require_full_home(f);
    if (rho < 0.0 || rho > 1.0) throw DomainMismatch("rho must lie in [0,1]");
    const auto& cx = *f.complex();
    const int k = cx.part_count();
    EfronSteinFamily fam = es_all(f);
    const Marginal& mfull = cx.marginal(f.home());
    std::vector<double> v(mfull.size(), 0.0);
    for (Subset s : all_subsets(k)) {
        const double w = std::pow(rho, s.size());
        if (w == 0.0) continue;
        const Fn& comp = fam.at(s);
        const Marginal& ms = cx.marginal(s);
        for (int z = 0; z < mfull.size(); ++z) v[z] += w * comp[ms.face_to_point[z]];
    }
    return Fn(f.complex(), f.home(), std::move(v));
}

double stability(const Fn& f, double rho) {
    Fn t = noise_direct(f, rho);
    return inner(t, t);
}

Fn updown(const Fn& f) {
    require_full_home(f);
    const auto& cx = *f.complex();
    const int k = cx.part_count();
    const Marginal& mfull = cx.marginal(f.home());
    std::vector<double> v(mfull.size(), 0.0);
    for (int i = 0; i < k; ++i) {
        const Subset s = Subset::full(k).without(i);
        Fn a = avg(f, s);
        const Marginal& ms = cx.marginal(s);
        for (int z = 0; z < mfull.size(); ++z) v[z] += a[ms.face_to_point[z]] / k;
    }
    return Fn(f.complex(), f.home(), std::move(v));
}

Fn updown_spectral(const Fn& f) {
    require_full_home(f);
    const auto& cx = *f.complex();
    const int k = cx.part_count();
    EfronSteinFamily fam = es_all(f);
    const Marginal& mfull = cx.marginal(f.home());
    std::vector<double> v(mfull.size(), 0.0);
    for (Subset s : all_subsets(k)) {
        const double w = double(k - s.size()) / k;
        if (w == 0.0) continue;
        const Fn& comp = fam.at(s);
        const Marginal& ms = cx.marginal(s);
        for (int z = 0; z < mfull.size(); ++z) v[z] += w * comp[ms.face_to_point[z]];
    }
    return Fn(f.complex(), f.home(), std::move(v));
}

ShadowSet shadow(const Fn& a) {
    require_full_home(a);
    if (!is_boolean(a)) throw NotBoolean("shadow needs a 0/1-valued function");
    const auto& cx = *a.complex();
    const int k = cx.part_count();
    const Marginal& mfull = cx.marginal(a.home());

    ShadowSet out;
    out.member.resize(k);
    std::vector<double> terms;
    for (int i = 0; i < k; ++i) {
        const Subset s = Subset::full(k).without(i);
        const Marginal& ms = cx.marginal(s);
        out.member[i].assign(ms.size(), 0);
        for (int z = 0; z < cx.face_count(); ++z)
            if (a[mfull.face_to_point[z]] > 0.5) out.member[i][ms.face_to_point[z]] = 1;
        for (int x = 0; x < ms.size(); ++x)
            if (out.member[i][x]) terms.push_back(ms.mass[x] / k);
    }
    out.down_mass = pairwise_sum(terms);
    return out;
}

CheckRecord check_noise_bound(const Fn& f, double rho, int d, double eps,
                              std::string instance) {
    require_full_home(f);
    const int k = f.complex()->part_count();
    const double n2 = inner(f, f);
    Fn fd = low_degree(es_all(f), d);
    const double lhs = stability(f, rho);
    const double rhs =
        inner(fd, fd) + std::pow(rho, d) * n2 + std::ldexp(eps * n2, 4 * k);
    CheckRecord r = hard_record("C18-small-set-expansion", std::move(instance), lhs, rhs);
    r.note = "noise bound: stability vs ||f^{<=d}||^2 + rho^d + 2^{4k} eps, rho=" +
             std::to_string(rho) + " d=" + std::to_string(d);
    return r;
}

CheckRecord check_sse(const Fn& f, double rho, int d, double delta, double eps,
                      std::string instance) {
    require_full_home(f);
    if (!is_boolean(f)) throw NotBoolean("small-set expansion needs a Boolean function");
    GlobalnessReport rep = globalness(f, d);
    if (rep.delta_min > delta + 1e-12)
        throw NotGlobal("function is not (d,delta)-global: delta_min=" +
                        std::to_string(rep.delta_min));

    const double n2 = inner(f, f);
    const double lhs = stability(f, rho);
    const double rhs =
        (std::pow(rho, d) + std::pow(100.0 * d, d) * delta * delta) * n2;
    CheckRecord r = residual_record("C18-small-set-expansion", std::move(instance), lhs,
                                    rhs, std::sqrt(eps) * n2);
    r.note = "rho=" + std::to_string(rho) + " delta=" + std::to_string(delta);
    return r;
}

std::vector<CheckRecord> check_kk(const Fn& a, int d, double delta, double eps,
                                  double eps_threshold, std::string instance) {
    require_full_home(a);
    if (!is_boolean(a)) throw NotBoolean("shadow bound needs a 0/1-valued indicator");
    const double delta_max = std::pow(200.0 * d, -double(d));
    if (delta > delta_max + 1e-12)
        throw PreconditionDelta("delta exceeds (200 d)^{-d}");
    GlobalnessReport rep = globalness(a, d);
    if (rep.delta_min > delta + 1e-12)
        throw NotGlobal("set is not (d,delta)-global: delta_min=" +
                        std::to_string(rep.delta_min));

    const int k = a.complex()->part_count();
    const double mu_a = expectation(a);
    ShadowSet sh = shadow(a);

    std::vector<CheckRecord> out;
    {
        const double lhs = mu_a * (1.0 + double(d) / (2.0 * k));
        CheckRecord r = residual_record("C19-kruskal-katona", instance, lhs, sh.down_mass,
                                        eps > eps_threshold ? std::sqrt(eps) : 0.0);
        r.note = "mu(A)=" + std::to_string(mu_a);
        out.push_back(std::move(r));
    }
    {
        Fn t = updown(a);
        Fn gap = a - t;
        const double walk = inner(gap, a);  // <f - Tf, f>
        CheckRecord r =
            hard_record("C19-kruskal-katona", instance, walk, sh.down_mass - mu_a);
        r.note = "walk identity <f-Tf,f> <= shadow mass - mu(A)";
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace efstein
