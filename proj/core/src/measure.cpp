#include "efstein/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numeric>
#include <unordered_set>

namespace efstein {

namespace {

// FNV-1a, 64-bit
struct Hasher {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001B3ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void i32(std::int32_t v) { bytes(&v, sizeof v); }
    void str(const std::string& s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }
};

bool lex_less(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// PartiteUniverse

PartiteUniverse::PartiteUniverse(std::vector<std::vector<std::string>> parts)
    : parts_(std::move(parts)) {
    if (parts_.empty()) throw InvalidMeasure("universe needs at least one part");
    for (const auto& p : parts_) {
        if (p.empty()) throw InvalidMeasure("empty part in universe");
        std::unordered_set<std::string> seen(p.begin(), p.end());
        if (seen.size() != p.size()) throw InvalidMeasure("duplicate label within a part");
    }
}

PartiteUniverse PartiteUniverse::with_sizes(std::span<const int> sizes) {
    std::vector<std::vector<std::string>> parts;
    parts.reserve(sizes.size());
    for (int n : sizes) {
        if (n < 1) throw InvalidMeasure("part size must be >= 1");
        std::vector<std::string> labels;
        labels.reserve(n);
        for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
        parts.push_back(std::move(labels));
    }
    return PartiteUniverse(std::move(parts));
}

PartiteUniverse PartiteUniverse::restricted(Subset keep) const {
    std::vector<std::vector<std::string>> parts;
    for (int i : keep.elements()) parts.push_back(parts_[i]);
    return PartiteUniverse(std::move(parts));
}

// ---------------------------------------------------------------------------
// Marginal

int Marginal::find(std::span<const std::int32_t> c) const {
    int lo = 0, hi = size();
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (lex_less(point(mid), c))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < size() && std::equal(c.begin(), c.end(), point(lo).begin())) return lo;
    return -1;
}

// ---------------------------------------------------------------------------
// WeightedComplex

WeightedComplex::WeightedComplex(PartiteUniverse u, std::vector<std::int32_t> faces,
                                 std::vector<double> weights)
    : k_(u.part_count()),
      universe_(std::move(u)),
      faces_(std::move(faces)),
      weights_(std::move(weights)) {
    Hasher hs;
    hs.u64(std::uint64_t(k_));
    for (int i = 0; i < k_; ++i) {
        hs.u64(std::uint64_t(universe_.part_size(i)));
        for (const auto& l : universe_.labels(i)) hs.str(l);
    }
    for (std::int32_t c : faces_) hs.i32(c);
    for (double w : weights_) hs.u64(std::bit_cast<std::uint64_t>(w));
    id_ = hs.h;
}

ComplexPtr WeightedComplex::create(PartiteUniverse universe,
                                   std::vector<std::vector<std::int32_t>> faces,
                                   std::vector<double> weights, WeightPolicy policy) {
    const int k = universe.part_count();
    if (k > kMaxParts) throw InvalidMeasure("part count exceeds the configured maximum");
    if (faces.size() != weights.size())
        throw InvalidMeasure("face and weight counts differ");

    // Drop zero-weight faces, reject negatives and out-of-range coordinates.
    std::vector<int> kept;
    kept.reserve(faces.size());
    for (int i = 0; i < int(faces.size()); ++i) {
        if (!(weights[i] >= 0.0)) throw InvalidMeasure("negative or NaN weight");
        if (int(faces[i].size()) != k) throw InvalidMeasure("face arity mismatch");
        for (int p = 0; p < k; ++p)
            if (faces[i][p] < 0 || faces[i][p] >= universe.part_size(p))
                throw InvalidMeasure("face coordinate out of range");
        if (weights[i] > 0.0) kept.push_back(i);
    }
    if (kept.empty()) throw InvalidMeasure("empty support");

    std::sort(kept.begin(), kept.end(), [&](int a, int b) {
        return std::lexicographical_compare(faces[a].begin(), faces[a].end(),
                                            faces[b].begin(), faces[b].end());
    });
    for (std::size_t i = 1; i < kept.size(); ++i)
        if (faces[kept[i]] == faces[kept[i - 1]]) throw InvalidMeasure("duplicate face");

    std::vector<double> w;
    w.reserve(kept.size());
    for (int i : kept) w.push_back(weights[i]);
    const double raw_sum = pairwise_sum(w);
    if (!(raw_sum > 0.0)) throw InvalidMeasure("weights sum to zero");
    if (policy == WeightPolicy::Strict && std::abs(raw_sum - 1.0) > 1e-6)
        throw InvalidMeasure("raw weight sum deviates from 1 by more than 1e-6");
    // Already-normalized inputs are kept bit-for-bit so that a save/load
    // round trip preserves the content id.
    if (std::abs(raw_sum - 1.0) > 1e-13)
        for (double& x : w) x /= raw_sum;

    std::vector<std::int32_t> flat;
    flat.reserve(kept.size() * k);
    for (int i : kept)
        flat.insert(flat.end(), faces[i].begin(), faces[i].end());

    return ComplexPtr(new WeightedComplex(std::move(universe), std::move(flat), std::move(w)));
}

const Marginal& WeightedComplex::marginal(Subset s) const {
    if ((s.bits() & ~Subset::full(k_).bits()) != 0)
        throw DomainMismatch("subset has bits beyond the part count");
    {
        std::shared_lock lock(cache_mutex_);
        auto it = marginal_cache_.find(s.bits());
        if (it != marginal_cache_.end()) return *it->second;
    }

    auto m = std::make_unique<Marginal>();
    m->subset = s;
    m->arity = s.size();
    const int n = face_count();
    const auto elems = s.elements();

    if (s == Subset::full(k_)) {
        m->coords = faces_;
        m->mass = weights_;
        m->face_to_point.resize(n);
        m->rep_face.resize(n);
        std::iota(m->face_to_point.begin(), m->face_to_point.end(), 0);
        std::iota(m->rep_face.begin(), m->rep_face.end(), 0);
    } else {
        // Projected tuples, sorted lex; equal tuples merge into one point.
        std::vector<std::int32_t> proj(std::size_t(n) * m->arity);
        for (int z = 0; z < n; ++z) {
            auto f = face(z);
            for (int j = 0; j < m->arity; ++j)
                proj[std::size_t(z) * m->arity + j] = f[elems[j]];
        }
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        const int a = m->arity;
        auto tup = [&](int z) {
            return std::span<const std::int32_t>(proj.data() + std::size_t(z) * a, std::size_t(a));
        };
        std::stable_sort(order.begin(), order.end(),
                         [&](int x, int y) { return lex_less(tup(x), tup(y)); });

        m->face_to_point.assign(n, -1);
        for (int idx = 0; idx < n; ++idx) {
            int z = order[idx];
            bool fresh = (idx == 0) || lex_less(tup(order[idx - 1]), tup(z));
            if (fresh) {
                m->rep_face.push_back(z);
                auto t = tup(z);
                m->coords.insert(m->coords.end(), t.begin(), t.end());
            }
            m->face_to_point[z] = int(m->rep_face.size()) - 1;
        }
        // Mass in ascending face order: the same accumulation order used by
        // the averaging operators, so constants are preserved bit-exactly.
        m->mass.assign(m->rep_face.size(), 0.0);
        for (int z = 0; z < n; ++z) m->mass[m->face_to_point[z]] += weights_[z];
    }

    std::unique_lock lock(cache_mutex_);
    auto [it, inserted] = marginal_cache_.try_emplace(s.bits(), std::move(m));
    return *it->second;
}

ComplexPtr marginal_complex(const ComplexPtr& mu, Subset s) {
    if (s == Subset::full(mu->part_count())) return mu;
    if (s.is_empty()) {
        PartiteUniverse u({{"*"}});
        return WeightedComplex::create(std::move(u), {{0}}, {1.0});
    }
    const Marginal& m = mu->marginal(s);
    std::vector<std::vector<std::int32_t>> faces(m.size());
    std::vector<double> w(m.size());
    for (int i = 0; i < m.size(); ++i) {
        auto p = m.point(i);
        faces[i].assign(p.begin(), p.end());
        w[i] = m.mass[i];
    }
    return WeightedComplex::create(mu->universe().restricted(s), std::move(faces), std::move(w));
}

ComplexPtr link(const ComplexPtr& mu, const PartialAssignment& x) {
    const int k = mu->part_count();
    if (x.subset.is_empty()) return mu;
    if (int(x.coords.size()) != x.subset.size())
        throw DomainMismatch("assignment arity does not match its subset");
    const Marginal& m = mu->marginal(x.subset);
    const int xi = m.find(x.coords);
    if (xi < 0) throw ZeroMassPoint("assignment is outside the support of mu_S");
    if (x.subset == Subset::full(k))
        throw DomainMismatch("link requires at least one free part");

    const Subset rest = x.subset.complement(k);
    const auto rest_elems = rest.elements();
    std::vector<std::vector<std::int32_t>> faces;
    std::vector<double> w;
    for (int z = 0; z < mu->face_count(); ++z) {
        if (m.face_to_point[z] != xi) continue;
        auto f = mu->face(z);
        std::vector<std::int32_t> y(rest_elems.size());
        for (std::size_t j = 0; j < rest_elems.size(); ++j) y[j] = f[rest_elems[j]];
        faces.push_back(std::move(y));
        w.push_back(mu->weight(z) / m.mass[xi]);
    }
    return WeightedComplex::create(mu->universe().restricted(rest), std::move(faces),
                                   std::move(w));
}

// ---------------------------------------------------------------------------
// Fn

Fn::Fn(ComplexPtr cx, Subset home, std::vector<double> values)
    : cx_(std::move(cx)), home_(home), values_(std::move(values)) {
    if (!cx_) throw DomainMismatch("function needs a complex");
    if (int(values_.size()) != cx_->marginal(home_).size())
        throw DomainMismatch("value vector length does not match supp(mu_home)");
}

Fn Fn::constant(ComplexPtr cx, Subset home, double c) {
    const int n = cx->marginal(home).size();
    return Fn(std::move(cx), home, std::vector<double>(std::size_t(n), c));
}

Fn& Fn::operator+=(const Fn& o) {
    if (!same_domain(o)) throw DomainMismatch("adding functions from different domains");
    for (int i = 0; i < size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Fn& Fn::operator-=(const Fn& o) {
    if (!same_domain(o)) throw DomainMismatch("subtracting functions from different domains");
    for (int i = 0; i < size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Fn& Fn::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

double pairwise_sum(std::span<const double> terms) {
    const std::size_t n = terms.size();
    if (n <= 16) {
        double s = 0.0;
        for (double t : terms) s += t;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(terms.subspan(0, half)) + pairwise_sum(terms.subspan(half));
}

namespace {

std::vector<double>& scratch() {
    thread_local std::vector<double> buf;
    return buf;
}

}  // namespace

double inner(const Fn& f, const Fn& g) {
    if (!f.same_domain(g)) throw DomainMismatch("inner product across domains");
    const Marginal& m = f.complex()->marginal(f.home());
    auto& terms = scratch();
    terms.resize(f.size());
    for (int i = 0; i < f.size(); ++i) terms[i] = m.mass[i] * f[i] * g[i];
    return pairwise_sum(terms);
}

double expectation(const Fn& f) {
    const Marginal& m = f.complex()->marginal(f.home());
    auto& terms = scratch();
    terms.resize(f.size());
    for (int i = 0; i < f.size(); ++i) terms[i] = m.mass[i] * f[i];
    return pairwise_sum(terms);
}

double norm_2(const Fn& f) { return std::sqrt(inner(f, f)); }

double norm_4(const Fn& f) {
    const Marginal& m = f.complex()->marginal(f.home());
    auto& terms = scratch();
    terms.resize(f.size());
    for (int i = 0; i < f.size(); ++i) {
        const double sq = f[i] * f[i];
        terms[i] = m.mass[i] * sq * sq;
    }
    return std::pow(pairwise_sum(terms), 0.25);
}

double norm_inf(const Fn& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double norm_p(const Fn& f, double p) {
    if (p == 2.0) return norm_2(f);
    if (p == 4.0) return norm_4(f);
    const Marginal& m = f.complex()->marginal(f.home());
    auto& terms = scratch();
    terms.resize(f.size());
    for (int i = 0; i < f.size(); ++i) terms[i] = m.mass[i] * std::pow(std::abs(f[i]), p);
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

Fn embed(const Fn& g, Subset super) {
    if (!g.home().subset_of(super)) throw DomainMismatch("embed target must contain home");
    if (g.home() == super) return g;
    const auto& cx = *g.complex();
    const Marginal& ms = cx.marginal(g.home());
    const Marginal& mt = cx.marginal(super);
    std::vector<double> v(mt.size());
    for (int t = 0; t < mt.size(); ++t) v[t] = g[ms.face_to_point[mt.rep_face[t]]];
    return Fn(g.complex(), super, std::move(v));
}

Fn lift(const Fn& g) { return embed(g, Subset::full(g.complex()->part_count())); }

Fn restrict_fix(const Fn& f, const PartialAssignment& x) {
    if (x.subset.is_empty()) return f;
    if (!x.subset.subset_of(f.home()))
        throw DomainMismatch("restriction subset must be contained in home");
    const auto& cx = *f.complex();
    const int k = cx.part_count();

    ComplexPtr lk = link(f.complex(), x);  // validates x, throws ZeroMassPoint
    const Subset rest_orig = f.home() - x.subset;
    const auto rest_elems = x.subset.complement(k).elements();

    // home of the result in link part indexing
    Subset link_home = Subset::empty();
    for (std::size_t j = 0; j < rest_elems.size(); ++j)
        if (rest_orig.contains(rest_elems[j])) link_home = link_home.with(int(j));

    const Marginal& mh = cx.marginal(f.home());
    const Marginal& lm = lk->marginal(link_home);
    const auto s_elems = x.subset.elements();
    const auto r_elems = rest_orig.elements();
    const auto h_elems = f.home().elements();

    // position of each home element within the home tuple
    std::vector<int> pos(std::size_t(k), -1);
    for (std::size_t j = 0; j < h_elems.size(); ++j) pos[h_elems[j]] = int(j);

    std::vector<double> v(lm.size());
    std::vector<std::int32_t> full(h_elems.size());
    for (int i = 0; i < lm.size(); ++i) {
        auto y = lm.point(i);
        for (std::size_t j = 0; j < s_elems.size(); ++j) full[pos[s_elems[j]]] = x.coords[j];
        for (std::size_t j = 0; j < r_elems.size(); ++j) full[pos[r_elems[j]]] = y[j];
        const int idx = mh.find(full);
        if (idx < 0) throw ZeroMassPoint("restriction point missing from supp(mu_home)");
        v[i] = f[idx];
    }
    return Fn(std::move(lk), link_home, std::move(v));
}

bool is_boolean(const Fn& f, double tol) {
    for (double v : f.values())
        if (std::abs(v) > tol && std::abs(v - 1.0) > tol) return false;
    return true;
}

}  // namespace efstein
