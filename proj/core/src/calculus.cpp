#include "efstein/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace efstein {

namespace {

void require_full_home(const Fn& f) {
    if (f.home() != Subset::full(f.complex()->part_count()))
        throw DomainMismatch("operation expects a full-home function");
}

int marginal_index(const Fn& f, Subset s, const PartialAssignment& x) {
    if (x.subset != s) throw DomainMismatch("assignment subset does not match S");
    const Marginal& m = f.complex()->marginal(s);
    const int idx = m.find(x.coords);
    if (idx < 0) throw ZeroMassPoint("assignment outside supp(mu_S)");
    return idx;
}

/// Squared L^2(mu_x) norms of g(x,.) for every x in supp(mu_S), by a
/// single grouping pass over the top faces.
std::vector<double> grouped_sq_norms(const Fn& g, Subset s) {
    const auto& cx = *g.complex();
    const Marginal& ms = cx.marginal(s);
    const Marginal& mf = cx.marginal(g.home());
    std::vector<double> acc(ms.size(), 0.0);
    for (int z = 0; z < cx.face_count(); ++z) {
        const double v = g[mf.face_to_point[z]];
        acc[ms.face_to_point[z]] += cx.weight(z) * v * v;
    }
    for (int i = 0; i < ms.size(); ++i) acc[i] /= ms.mass[i];
    return acc;
}

}  // namespace

Fn laplacian(const Fn& f, Subset s) {
    require_full_home(f);
    const auto& cx = *f.complex();
    const int k = cx.part_count();
    const Marginal& mfull = cx.marginal(f.home());
    std::vector<double> v(mfull.size(), 0.0);
    for (Subset t : subsets_of(s)) {
        const double sign = parity_sign(t);
        const Subset u = t.complement(k);
        Fn a = avg(f, u);
        const Marginal& mu_ = cx.marginal(u);
        for (int z = 0; z < mfull.size(); ++z) v[z] += sign * a[mu_.face_to_point[z]];
    }
    return Fn(f.complex(), f.home(), std::move(v));
}

Fn laplacian_trunc(const Fn& f, Subset s, int d) {
    require_full_home(f);
    if (s.size() > d) throw DegreeTooSmall("truncation degree below |S|");
    const auto& cx = *f.complex();
    const int k = cx.part_count();
    EfronSteinFamily fam = es_all(f);
    const Marginal& mfull = cx.marginal(f.home());
    std::vector<double> v(mfull.size(), 0.0);
    for (Subset t : all_subsets(k)) {
        if (!s.subset_of(t) || t.size() > d) continue;
        const Fn& comp = fam.at(t);
        const Marginal& mt = cx.marginal(t);
        for (int z = 0; z < mfull.size(); ++z) v[z] += comp[mt.face_to_point[z]];
    }
    return Fn(f.complex(), f.home(), std::move(v));
}

Fn derivative(const Fn& f, Subset s, const PartialAssignment& x) {
    if (s.is_empty()) return f;
    return restrict_fix(laplacian(f, s), x);
}

Fn derivative_trunc(const Fn& f, Subset s, const PartialAssignment& x, int d) {
    if (s.is_empty()) return laplacian_trunc(f, s, d);
    return restrict_fix(laplacian_trunc(f, s, d), x);
}

double influence(const Fn& f, Subset s, const PartialAssignment& x) {
    if (s.is_empty()) return inner(f, f);
    Fn l = laplacian(f, s);
    return grouped_sq_norms(l, s)[marginal_index(f, s, x)];
}

double influence_trunc(const Fn& f, Subset s, const PartialAssignment& x, int d) {
    Fn l = laplacian_trunc(f, s, d);
    if (s.is_empty()) return inner(l, l);
    return grouped_sq_norms(l, s)[marginal_index(f, s, x)];
}

InfluenceProfile influence_profile(const Fn& f, Subset s, int d) {
    require_full_home(f);
    if (s.size() > d) throw DegreeTooSmall("truncation degree below |S|");
    const Marginal& ms = f.complex()->marginal(s);

    InfluenceProfile p;
    p.subset = s;
    p.trunc_degree = d;
    p.influence = grouped_sq_norms(laplacian(f, s), s);
    p.influence_trunc = grouped_sq_norms(laplacian_trunc(f, s, d), s);

    auto aggregate = [&](const std::vector<double>& vals, double& mean, double& mean_sq,
                         double& mx) {
        std::vector<double> t1(vals.size()), t2(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            t1[i] = ms.mass[i] * vals[i];
            t2[i] = ms.mass[i] * vals[i] * vals[i];
        }
        mean = pairwise_sum(t1);
        mean_sq = pairwise_sum(t2);
        mx = 0.0;
        for (double v : vals) mx = std::max(mx, v);
    };
    aggregate(p.influence, p.mean, p.mean_sq, p.max);
    aggregate(p.influence_trunc, p.mean_trunc, p.mean_sq_trunc, p.max_trunc);
    return p;
}

GlobalnessReport globalness(const Fn& f, int d) {
    require_full_home(f);
    const auto& cx = *f.complex();
    const int k = cx.part_count();
    if (d > k) throw DegreeTooSmall("globalness degree exceeds the part count");

    GlobalnessReport rep;
    rep.d = d;
    rep.delta_min = -1.0;
    for (Subset s : all_subsets(k)) {
        if (s.size() > d) continue;
        const Marginal& ms = cx.marginal(s);
        std::vector<double> sq = grouped_sq_norms(f, s);
        for (int i = 0; i < ms.size(); ++i) {
            const double nrm = std::sqrt(sq[i]);
            if (nrm > rep.delta_min) {  // strict: first maximizer wins
                rep.delta_min = nrm;
                rep.witness_subset = s;
                auto pt = ms.point(i);
                rep.witness_x.assign(pt.begin(), pt.end());
            }
        }
    }
    return rep;
}

std::vector<CheckRecord> check_global_bounds(const Fn& f, int d, double delta, double eps,
                                             const std::string& instance) {
    require_full_home(f);
    GlobalnessReport rep = globalness(f, d);
    if (rep.delta_min > delta + 1e-12)
        throw NotGlobal("function is not (d,delta)-global: delta_min=" +
                        std::to_string(rep.delta_min));

    const int k = f.complex()->part_count();
    std::vector<CheckRecord> out;

    // ||f^{=T}||_inf <= 2^{|T|} delta, every |T| <= d (worst T recorded).
    {
        EfronSteinFamily fam = es_all(f);
        double worst_margin = -1e300, lhs = 0.0, rhs = 0.0;
        Subset worst;
        for (const auto& [bits, comp] : fam.components()) {
            Subset t(bits);
            if (t.size() > d) continue;
            const double l = norm_inf(comp);
            const double r = std::ldexp(delta, t.size());
            if (l - r > worst_margin) {
                worst_margin = l - r;
                lhs = l;
                rhs = r;
                worst = t;
            }
        }
        CheckRecord r = hard_record("C13-global-component-bound", instance, lhs, rhs);
        r.note = "worst T=" + worst.to_string();
        out.push_back(std::move(r));
    }

    const double f4 = norm_4(f);
    const double finf = norm_inf(f);
    const double f2sq = inner(f, f);

    // Influence second moments, worst T of each form.
    double worst66 = -1e300, lhs66 = 0.0, rhs66 = 0.0;
    double worst67 = -1e300, lhs67 = 0.0, rhs67 = 0.0;
    Subset t66, t67;
    for (Subset t : all_subsets(k)) {
        if (t.size() > d) continue;
        InfluenceProfile p = influence_profile(f, t, d);
        const double l1 = p.mean_sq;
        const double r1 = std::ldexp(delta * delta, d + 1) * p.mean;
        if (l1 - r1 > worst66) {
            worst66 = l1 - r1;
            lhs66 = l1;
            rhs66 = r1;
            t66 = t;
        }
        const double l2 = p.mean_sq_trunc;
        const double r2 = std::ldexp(delta * delta, d + 4) * p.mean_trunc;
        if (l2 - r2 > worst67) {
            worst67 = l2 - r2;
            lhs67 = l2;
            rhs67 = r2;
            t67 = t;
        }
    }
    CheckRecord r66 = residual_record("C14-influence-bounds", instance, lhs66, rhs66,
                                      eps * eps * f4 * f4 * f4 * f4);
    r66.note = "E[I^2] vs 2^{d+1} delta^2 E[I], worst T=" + t66.to_string();
    out.push_back(std::move(r66));

    CheckRecord r67 = residual_record("C14-influence-bounds", instance, lhs67, rhs67,
                                      eps * eps * finf * finf * f2sq);
    r67.note = "truncated: E[(I<=d)^2] vs 2^{d+4} delta^2 E[I<=d], worst T=" + t67.to_string();
    out.push_back(std::move(r67));
    return out;
}

ApproxESWitness derivative_es_family(const Fn& f, Subset t) {
    require_full_home(f);
    const auto& cx = f.complex();
    const int k = cx->part_count();

    if (t == Subset::full(k)) {
        // the links are points: the only member is L_{[k]} f itself
        ApproxESWitness w{EfronSteinFamily(cx->id()), {}, 0.0, 0.0, std::nullopt};
        Fn lap = laplacian(f, t);
        w.family.set(t, lap);
        w.witnesses.emplace(t.bits(), f);
        WitnessBounds b = validate_approx_es(lap, w);
        w.alpha = b.alpha_min;
        w.eps_prime = b.eps_prime_min;
        w.beta = b.beta_min;
        return w;
    }

    const Marginal& mt = cx->marginal(t);
    const auto rest = t.complement(k).elements();

    // Per-x decomposition of the derivative within the link.
    std::vector<EfronSteinFamily> link_fams;
    std::vector<ComplexPtr> links;
    link_fams.reserve(mt.size());
    Fn lap = laplacian(f, t);
    for (int xi = 0; xi < mt.size(); ++xi) {
        auto pt = mt.point(xi);
        PartialAssignment x{t, {pt.begin(), pt.end()}};
        Fn dx = t.is_empty() ? f : restrict_fix(lap, x);
        link_fams.push_back(es_all(dx));
        links.push_back(dx.complex());
    }

    ApproxESWitness w{EfronSteinFamily(cx->id()), {}, 0.0, 0.0, std::nullopt};
    for (Subset s : all_subsets(k)) {
        if (!t.subset_of(s)) continue;
        // link-part mask of S \ T
        Subset link_mask = Subset::empty();
        for (std::size_t j = 0; j < rest.size(); ++j)
            if (s.contains(rest[j])) link_mask = link_mask.with(int(j));

        const Marginal& ms = cx->marginal(s);
        const auto s_elems = s.elements();
        std::vector<int> sel;  // positions within the S-tuple of the S\T part
        for (std::size_t j = 0; j < s_elems.size(); ++j)
            if (!t.contains(s_elems[j])) sel.push_back(int(j));

        std::vector<double> v(ms.size());
        std::vector<std::int32_t> y(sel.size());
        const Marginal& mst = cx->marginal(t);  // for projecting S-points to T
        for (int i = 0; i < ms.size(); ++i) {
            const int xi = mst.face_to_point[ms.rep_face[i]];
            auto pt = ms.point(i);
            for (std::size_t j = 0; j < sel.size(); ++j) y[j] = pt[sel[j]];
            const Marginal& lm = links[xi]->marginal(link_mask);
            const int yi = lm.find(y);
            if (yi < 0) throw ZeroMassPoint("link point missing");
            v[i] = link_fams[xi].at(link_mask)[yi];
        }
        w.family.set(s, Fn(cx, s, std::move(v)));
        w.witnesses.emplace(s.bits(), f);
    }

    WitnessBounds b = validate_approx_es(lap, w);
    w.alpha = b.alpha_min;
    w.eps_prime = b.eps_prime_min;
    w.beta = b.beta_min;
    return w;
}

}  // namespace efstein
