#include "efstein/generators.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "efstein/calculus.hpp"
#include "efstein/decomposition.hpp"
#include "efstein/rng.hpp"

namespace efstein {

namespace {

std::string join_sizes(const std::vector<int>& sizes) {
    std::string s;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(sizes[i]);
    }
    return s;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

/// All faces of the full grid in lex order, with the given per-face weight.
void full_grid(std::span<const int> sizes,
               const std::function<double(std::span<const std::int32_t>)>& weight_of,
               std::vector<std::vector<std::int32_t>>& faces, std::vector<double>& weights) {
    const int k = int(sizes.size());
    std::vector<std::int32_t> cur(k, 0);
    while (true) {
        const double w = weight_of(cur);
        if (w != 0.0) {
            faces.emplace_back(cur);
            weights.push_back(w);
        }
        int i = k - 1;
        while (i >= 0 && cur[i] + 1 == sizes[i]) cur[i--] = 0;
        if (i < 0) break;
        ++cur[i];
    }
}

}  // namespace

std::string GenSpec::tag() const {
    switch (kind) {
        case Kind::Product:
            return "product[" + join_sizes(sizes) + ";seed=" + std::to_string(seed) + "]";
        case Kind::EtaCorrelated:
            return "eta[" + fmt(eta) + "]";
        case Kind::PerturbedProduct:
            return "perturbed[" + join_sizes(sizes) + ";gamma=" + fmt(gamma) +
                   ";seed=" + std::to_string(seed) + "]";
        case Kind::SparseRandom:
            return "sparse[" + join_sizes(sizes) + ";density=" + fmt(density) +
                   ";seed=" + std::to_string(seed) + "]";
    }
    return "?";
}

ComplexPtr generate(const GenSpec& spec) {
    switch (spec.kind) {
        case GenSpec::Kind::Product: return gen_product(spec.sizes, spec.seed);
        case GenSpec::Kind::EtaCorrelated: return gen_eta_correlated(spec.eta);
        case GenSpec::Kind::PerturbedProduct:
            return gen_perturbed_product(spec.sizes, spec.gamma, spec.seed);
        case GenSpec::Kind::SparseRandom:
            return gen_sparse_random(spec.sizes, spec.density, spec.seed);
    }
    throw Error("unknown generator kind");
}

ComplexPtr gen_product(const std::vector<std::vector<double>>& marginals) {
    std::vector<int> sizes;
    sizes.reserve(marginals.size());
    std::vector<std::vector<double>> norm(marginals.size());
    for (std::size_t i = 0; i < marginals.size(); ++i) {
        sizes.push_back(int(marginals[i].size()));
        double total = 0.0;
        for (double w : marginals[i]) {
            if (!(w >= 0.0)) throw InvalidMeasure("negative marginal weight");
            total += w;
        }
        if (!(total > 0.0)) throw InvalidMeasure("marginal sums to zero");
        norm[i] = marginals[i];
        for (double& w : norm[i]) w /= total;
    }
    std::vector<std::vector<std::int32_t>> faces;
    std::vector<double> weights;
    full_grid(sizes,
              [&](std::span<const std::int32_t> c) {
                  double w = 1.0;
                  for (std::size_t i = 0; i < norm.size(); ++i) w *= norm[i][c[i]];
                  return w;
              },
              faces, weights);
    return WeightedComplex::create(PartiteUniverse::with_sizes(sizes), std::move(faces),
                                   std::move(weights));
}

ComplexPtr gen_product(std::span<const int> sizes, std::uint64_t seed) {
    SplitRng rng(seed, /*stream=*/0x70726F64);  // "prod"
    std::vector<std::vector<double>> marginals;
    marginals.reserve(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        SplitRng part = rng.split(i);
        std::vector<double> m(std::size_t(sizes[i]));
        for (double& w : m) w = 0.25 + part.unit();  // bounded away from zero
        marginals.push_back(std::move(m));
    }
    return gen_product(marginals);
}

ComplexPtr gen_product_uniform(std::span<const int> sizes) {
    std::vector<std::vector<double>> marginals;
    for (int n : sizes) marginals.emplace_back(std::size_t(n), 1.0);
    return gen_product(marginals);
}

ComplexPtr gen_eta_correlated(double eta) {
    if (eta < 0.0 || eta >= 1.0) throw InvalidMeasure("eta must lie in [0,1)");
    const double same = (1.0 + eta) / 4.0;
    const double diff = (1.0 - eta) / 4.0;
    return WeightedComplex::create(PartiteUniverse::with_sizes(std::vector<int>{2, 2}),
                                   {{0, 0}, {0, 1}, {1, 0}, {1, 1}},
                                   {same, diff, diff, same});
}

ComplexPtr gen_perturbed_product(std::span<const int> sizes, double gamma,
                                 std::uint64_t seed) {
    SplitRng rng(seed, /*stream=*/0x70657274);  // "pert"
    std::size_t count = 1;
    for (int n : sizes) count *= std::size_t(n);
    double uniform = 1.0 / double(count);
    std::vector<std::vector<std::int32_t>> faces;
    std::vector<double> weights;
    full_grid(sizes,
              [&](std::span<const std::int32_t>) {
                  const double factor = 1.0 + gamma * rng.symmetric();
                  if (factor <= 0.0)
                      throw NegativeWeight("perturbation drove a weight below zero");
                  return uniform * factor;
              },
              faces, weights);
    return WeightedComplex::create(PartiteUniverse::with_sizes(sizes), std::move(faces),
                                   std::move(weights));
}

CertifiedComplex gen_perturbed_product_certified(std::span<const int> sizes, double gamma,
                                                 std::uint64_t seed) {
    ComplexPtr mu = gen_perturbed_product(sizes, gamma, seed);
    return {mu, certify_epsilon(mu)};
}

ComplexPtr gen_sparse_random(std::span<const int> sizes, double density,
                             std::uint64_t seed) {
    if (density <= 0.0 || density > 1.0) throw InvalidMeasure("density must lie in (0,1]");
    SplitRng base(seed, /*stream=*/0x73707273);  // "sprs"
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        SplitRng rng = base.split(attempt);
        std::vector<std::vector<std::int32_t>> faces;
        std::vector<double> weights;
        full_grid(sizes,
                  [&](std::span<const std::int32_t>) {
                      return rng.coin(density) ? 1.0 : 0.0;
                  },
                  faces, weights);
        if (!faces.empty())
            return WeightedComplex::create(PartiteUniverse::with_sizes(sizes),
                                           std::move(faces), std::move(weights));
    }
    throw Error("sparse generator produced an empty support 100 times");
}

std::string FnSpec::tag() const {
    switch (kind) {
        case Kind::Dictator:
            return "dictator(" + std::to_string(part) + "=" + std::to_string(value) + ")";
        case Kind::RandomLowDegree:
            return "rld(d=" + std::to_string(degree) + ";seed=" + std::to_string(seed) + ")";
        case Kind::RandomGlobalSet:
            return "globalset(p=" + fmt(p) + ";seed=" + std::to_string(seed) + ")";
        case Kind::RandomBoolean:
            return "boolean(p=" + fmt(p) + ";seed=" + std::to_string(seed) + ")";
    }
    return "?";
}

namespace {

Fn sample_boolean(const ComplexPtr& mu, double p, SplitRng rng) {
    std::vector<double> v(std::size_t(mu->face_count()), 0.0);
    for (double& x : v) x = rng.coin(p) ? 1.0 : 0.0;
    return Fn(mu, Subset::full(mu->part_count()), std::move(v));
}

}  // namespace

Fn gen_function(const ComplexPtr& mu, const FnSpec& spec) {
    const int k = mu->part_count();
    const Subset full = Subset::full(k);
    switch (spec.kind) {
        case FnSpec::Kind::Dictator: {
            if (spec.part < 0 || spec.part >= k) throw DomainMismatch("dictator part");
            std::vector<double> v(std::size_t(mu->face_count()), 0.0);
            for (int z = 0; z < mu->face_count(); ++z)
                v[z] = mu->face(z)[spec.part] == spec.value ? 1.0 : 0.0;
            return Fn(mu, full, std::move(v));
        }
        case FnSpec::Kind::RandomLowDegree: {
            SplitRng rng(spec.seed, 0x726C64);  // "rld"
            Fn out = Fn::constant(mu, full, 0.0);
            for (Subset s : all_subsets(k)) {
                if (s.size() > spec.degree) continue;
                SplitRng hs = rng.split(s.bits());
                std::vector<double> v(std::size_t(mu->face_count()), 0.0);
                for (double& x : v) x = hs.symmetric();
                Fn h(mu, full, std::move(v));
                out += lift(es_component(h, s));
            }
            return out;
        }
        case FnSpec::Kind::RandomGlobalSet: {
            const double cap = spec.delta_cap > 0.0 ? spec.delta_cap : 2.0 * std::sqrt(spec.p);
            SplitRng base(spec.seed, 0x676C62);  // "glb"
            for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
                Fn f = sample_boolean(mu, spec.p, base.split(attempt));
                if (globalness(f, spec.global_d).delta_min <= cap) return f;
            }
            throw Error("no (d,delta)-global draw within 100 attempts");
        }
        case FnSpec::Kind::RandomBoolean:
            return sample_boolean(mu, spec.p, SplitRng(spec.seed, 0x626F6F6C));  // "bool"
    }
    throw Error("unknown function kind");
}

Fn gen_random_dense(const ComplexPtr& mu, std::uint64_t seed) {
    SplitRng rng(seed, 0x64656E73);  // "dens"
    std::vector<double> v(std::size_t(mu->face_count()), 0.0);
    for (double& x : v) x = rng.symmetric();
    return Fn(mu, Subset::full(mu->part_count()), std::move(v));
}

}  // namespace efstein
