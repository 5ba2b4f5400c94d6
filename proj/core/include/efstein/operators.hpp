#pragma once

#include <cstdint>
#include <vector>

#include "efstein/check.hpp"
#include "efstein/measure.hpp"

namespace efstein {

/// Averaging operator A_{S,T}: the conditional expectation of f(x_S)
/// given x_T, as a function on supp(mu_T). S is f's home. Preserves
/// constants exactly and contracts every p-norm. A_S means avg(f, S)
/// for a full-home f.
Fn avg(const Fn& f, Subset t);

/// Operator norm of A_{S,T} restricted to the orthogonal complement of
/// constants: the second singular value of the conditional-expectation
/// matrix in weighted-orthonormal coordinates. Singular values below
/// 1e-12 are reported as 0.
double opnorm_perp(const WeightedComplex& mu, Subset s, Subset t);

/// One skeleton measurement: the link at (subset,x) has second singular
/// value sigma2 between parts (part_a, part_b).
struct EpsWitness {
    Subset link_subset;
    std::vector<std::int32_t> x;
    int part_a = 0;
    int part_b = 0;
    double sigma2 = 0.0;
};

/// Per-link second singular values and the certified epsilon of a complex:
/// epsilon = max over every S with |S| <= k-2, every x in supp(mu_S) and
/// every pair of remaining parts.
struct EpsCertificate {
    double epsilon = 0.0;
    std::vector<EpsWitness> witnesses;

    /// Witnesses sorted by descending sigma2 (ties in enumeration order).
    std::vector<const EpsWitness*> top(std::size_t n) const;
};

EpsCertificate certify_epsilon(const ComplexPtr& mu, int threads = 1);

/// ||A_{S,T} f - E[f]||_2^2 <= |S| |T| eps^2 ||f||_2^2 for disjoint S,T
/// (f's home is S). Explicit constant, hard assertion.
CheckRecord check_disjoint_avg(const Fn& f, Subset t, double eps,
                               std::string instance = {});

/// ||A_{T2}[A_{T1} f] - A_{T1 cap T2} f||_2 <= |T1| |T2| eps ||f||_2 for a
/// full-home f. Explicit constant, hard assertion.
CheckRecord check_composition(const Fn& f, Subset t1, Subset t2, double eps,
                              std::string instance = {});

}  // namespace efstein
