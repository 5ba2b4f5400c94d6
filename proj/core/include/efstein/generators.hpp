#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efstein/measure.hpp"
#include "efstein/operators.hpp"

namespace efstein {

/// Seeded instance description. Identical spec => identical complex,
/// bit for bit.
struct GenSpec {
    enum class Kind { Product, EtaCorrelated, PerturbedProduct, SparseRandom };

    Kind kind = Kind::Product;
    std::vector<int> sizes;        ///< one entry per part
    double eta = 0.0;              ///< EtaCorrelated
    double gamma = 0.0;            ///< PerturbedProduct
    double density = 1.0;          ///< SparseRandom
    std::uint64_t seed = 0;

    std::string tag() const;       ///< stable instance label for reports
};

ComplexPtr generate(const GenSpec& spec);

/// Product of the given marginals (weights need not be normalized).
ComplexPtr gen_product(const std::vector<std::vector<double>>& marginals);
/// Product of seeded random marginals with the given part sizes.
ComplexPtr gen_product(std::span<const int> sizes, std::uint64_t seed);
/// Uniform product.
ComplexPtr gen_product_uniform(std::span<const int> sizes);

/// The canonical known-epsilon fixture (k = 2, binary):
/// mu(00) = mu(11) = (1+eta)/4, mu(01) = mu(10) = (1-eta)/4; certified
/// epsilon equals eta.
ComplexPtr gen_eta_correlated(double eta);

/// Uniform-product weights multiplied by (1 + gamma * u(face)) with seeded
/// u in [-1,1], renormalized. Throws NegativeWeight when gamma drives a
/// weight to zero or below.
ComplexPtr gen_perturbed_product(std::span<const int> sizes, double gamma,
                                 std::uint64_t seed);

/// The perturbed product together with its certificate; the measured
/// epsilon is O(gamma) but is recorded, never asserted.
struct CertifiedComplex {
    ComplexPtr complex;
    EpsCertificate certificate;
};
CertifiedComplex gen_perturbed_product_certified(std::span<const int> sizes, double gamma,
                                                 std::uint64_t seed);

/// Uniform measure over a random subset of the full face set (independent
/// density-coin per face).
ComplexPtr gen_sparse_random(std::span<const int> sizes, double density,
                             std::uint64_t seed);

/// Function generators over a fixed complex.
struct FnSpec {
    enum class Kind { Dictator, RandomLowDegree, RandomGlobalSet, RandomBoolean };

    Kind kind = Kind::Dictator;
    int part = 0;                  ///< Dictator: coordinate index
    int value = 0;                 ///< Dictator: element index within the part
    int degree = 0;                ///< RandomLowDegree
    double p = 0.0;                ///< density for the set kinds
    int global_d = 1;              ///< RandomGlobalSet: globalness degree
    double delta_cap = 0.0;        ///< RandomGlobalSet: 0 means 2*sqrt(p)
    std::uint64_t seed = 0;

    std::string tag() const;
};

/// RandomGlobalSet redraws (fresh substream) until the sampled set is
/// (global_d, delta_cap)-global, and throws Error after 100 attempts.
Fn gen_function(const ComplexPtr& mu, const FnSpec& spec);

/// Convenience: dense values uniform in [-1,1], full home.
Fn gen_random_dense(const ComplexPtr& mu, std::uint64_t seed);

}  // namespace efstein
