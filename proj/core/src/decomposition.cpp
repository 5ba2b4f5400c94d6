#include "efstein/decomposition.hpp"

#include <cmath>

namespace efstein {

const Fn& EfronSteinFamily::at(Subset s) const {
    auto it = comps_.find(s.bits());
    if (it == comps_.end()) throw DomainMismatch("family has no component " + s.to_string());
    return it->second;
}

void EfronSteinFamily::set(Subset s, Fn component) {
    if (component.complex()->id() != complex_id_)
        throw DomainMismatch("component belongs to a different complex");
    if (component.home() != s)
        throw DomainMismatch("component home must equal its index");
    comps_.insert_or_assign(s.bits(), std::move(component));
}

namespace {

void require_full_home(const Fn& f) {
    if (f.home() != Subset::full(f.complex()->part_count()))
        throw DomainMismatch("operation expects a full-home function");
}

/// f^{=S} from precomputed averages A_T f indexed by bitmask.
Fn combine_component(const Fn& f, Subset s, const std::vector<std::optional<Fn>>& avgs) {
    const auto& cx = *f.complex();
    const Marginal& ms = cx.marginal(s);
    std::vector<double> v(ms.size(), 0.0);
    for (Subset t : subsets_of(s)) {
        const double sign = parity_sign(s - t);
        const Fn& a = *avgs[t.bits()];
        const Marginal& mt = cx.marginal(t);
        for (int i = 0; i < ms.size(); ++i)
            v[i] += sign * a[mt.face_to_point[ms.rep_face[i]]];
    }
    return Fn(f.complex(), s, std::move(v));
}

}  // namespace

Fn es_component(const Fn& f, Subset s) {
    require_full_home(f);
    const int k = f.complex()->part_count();
    std::vector<std::optional<Fn>> avgs(std::size_t(1) << k);
    for (Subset t : subsets_of(s)) avgs[t.bits()] = avg(f, t);
    return combine_component(f, s, avgs);
}

EfronSteinFamily es_all(const Fn& f) {
    require_full_home(f);
    const int k = f.complex()->part_count();
    std::vector<std::optional<Fn>> avgs(std::size_t(1) << k);
    for (Subset t : all_subsets(k)) avgs[t.bits()] = avg(f, t);
    EfronSteinFamily fam(f.complex()->id());
    for (Subset s : all_subsets(k)) fam.set(s, combine_component(f, s, avgs));
    return fam;
}

Fn low_degree(const EfronSteinFamily& family, int d) {
    if (family.components().empty()) throw DomainMismatch("empty family");
    const Fn& first = family.components().begin()->second;
    const auto& cx = *first.complex();
    const int k = cx.part_count();
    const Marginal& mf = cx.marginal(Subset::full(k));
    std::vector<double> v(mf.size(), 0.0);
    for (const auto& [bits, comp] : family.components()) {
        Subset s(bits);
        if (s.size() > d) continue;
        const Marginal& ms = cx.marginal(s);
        for (int z = 0; z < mf.size(); ++z) v[z] += comp[ms.face_to_point[z]];
    }
    return Fn(first.complex(), Subset::full(k), std::move(v));
}

double parseval_defect(const Fn& f, const Fn& g) {
    if (!f.same_domain(g)) throw DomainMismatch("parseval_defect across domains");
    require_full_home(f);
    EfronSteinFamily ff = es_all(f);
    EfronSteinFamily gg = es_all(g);
    std::vector<double> terms;
    for (const auto& [bits, fc] : ff.components())
        terms.push_back(inner(fc, gg.at(Subset(bits))));
    return std::abs(inner(f, g) - pairwise_sum(terms));
}

double near_orthogonality_defect(const Fn& f, const Fn& g, Subset s, Subset t) {
    if (f.complex()->id() != g.complex()->id())
        throw DomainMismatch("near_orthogonality_defect across complexes");
    Fn fs = lift(es_component(f, s));
    Fn gt = lift(es_component(g, t));
    return std::abs(inner(fs, gt));
}

double idempotence_defect(const Fn& f, Subset s, Subset t) {
    Fn g = es_component(f, s);
    Fn gt = es_component(lift(g), t);
    if (t == s) {
        Fn diff = gt - g;
        return norm_2(diff);
    }
    return norm_2(gt);
}

bool WitnessBounds::dominated_by(const ApproxESWitness& w, double tol) const {
    const double slack = tol;
    if (w.alpha + slack < alpha_min) return false;
    if (w.eps_prime + slack < eps_prime_min) return false;
    if (w.beta && *w.beta + slack < beta_min) return false;
    return true;
}

WitnessBounds validate_approx_es(const Fn& f, const ApproxESWitness& w) {
    require_full_home(f);
    WitnessBounds b;
    b.alpha_min = norm_2(f);
    b.beta_min = norm_inf(f);

    // ||f - sum_S f_S||_2
    Fn sum = Fn::constant(f.complex(), f.home(), 0.0);
    for (const auto& [bits, fs] : w.family.components()) sum += lift(fs);
    Fn diff = f - sum;
    b.eps_prime_min = norm_2(diff);

    for (const auto& [bits, fs] : w.family.components()) {
        auto it = w.witnesses.find(bits);
        if (it == w.witnesses.end())
            throw MissingWitness("component " + Subset(bits).to_string() + " has no h_S");
        const Fn& h = it->second;
        b.alpha_min = std::max(b.alpha_min, norm_2(h));
        Fn hs = es_component(h, Subset(bits));
        Fn gap = hs - fs;
        b.eps_prime_min = std::max(b.eps_prime_min, norm_2(gap));
        b.beta_min = std::max({b.beta_min, norm_inf(fs), norm_inf(hs)});
    }
    return b;
}

double strong_parseval_defect(const Fn& f, const Fn& g, const ApproxESWitness& wf,
                              const ApproxESWitness& wg) {
    if (!f.same_domain(g)) throw DomainMismatch("strong_parseval_defect across domains");
    std::vector<double> terms;
    for (const auto& [bits, fs] : wf.family.components()) {
        if (!wg.family.has(Subset(bits))) continue;
        terms.push_back(inner(fs, wg.family.at(Subset(bits))));
    }
    return std::abs(inner(f, g) - pairwise_sum(terms));
}

L4Closeness l4_closeness_defect(const Fn& f, const ApproxESWitness& w1,
                                const ApproxESWitness& w2, Subset s, double eps,
                                double ceiling) {
    require_full_home(f);
    const auto& cx = f.complex();
    auto component_or_zero = [&](const ApproxESWitness& w, Subset idx) {
        if (w.family.has(idx)) return w.family.at(idx);
        return Fn::constant(cx, idx, 0.0);
    };

    L4Closeness out;
    const double alpha = std::max(w1.alpha, w2.alpha);
    const double epsp = std::max(w1.eps_prime, w2.eps_prime);
    const double beta = std::max(w1.beta.value_or(0.0), w2.beta.value_or(0.0));

    // (1) ||f_S - f'_S||_2^2 and (2) its fourth power norm, at the given S.
    Fn d_s = component_or_zero(w1, s) - component_or_zero(w2, s);
    out.lhs[0] = inner(d_s, d_s);
    const double n4 = norm_4(d_s);
    out.lhs[1] = n4 * n4 * n4 * n4;

    // (3) || sum_S (f_S - f'_S) ||_4^4 over the union of indices.
    Fn total = Fn::constant(cx, f.home(), 0.0);
    for (const auto& [bits, fs] : w1.family.components()) total += lift(fs);
    for (const auto& [bits, fs] : w2.family.components()) total -= lift(fs);
    const double t4 = norm_4(total);
    out.lhs[2] = t4 * t4 * t4 * t4;

    // (4) || f - sum_S f_S ||_4^4 for the first decomposition.
    Fn rec = Fn::constant(cx, f.home(), 0.0);
    for (const auto& [bits, fs] : w1.family.components()) rec += lift(fs);
    Fn gap = f - rec;
    const double g4 = norm_4(gap);
    out.lhs[3] = g4 * g4 * g4 * g4;

    const double a2 = alpha * alpha, b2 = beta * beta, e2 = epsp * epsp;
    const double f2 = inner(f, f);
    out.rhs_shape[0] = ceiling * (e2 + eps * a2);
    out.rhs_shape[1] = ceiling * (e2 * b2 + eps * a2 * b2);
    out.rhs_shape[2] = ceiling * (e2 * b2 + eps * eps * a2 * b2);
    out.rhs_shape[3] = ceiling * (eps * eps * b2 * (a2 + f2) + e2 * b2);
    for (int i = 0; i < 4; ++i)
        if (out.rhs_shape[i] > 0.0) out.ratio[i] = out.lhs[i] / out.rhs_shape[i];
    return out;
}

}  // namespace efstein
