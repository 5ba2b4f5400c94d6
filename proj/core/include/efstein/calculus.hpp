#pragma once

#include <vector>

#include "efstein/check.hpp"
#include "efstein/decomposition.hpp"
#include "efstein/measure.hpp"

namespace efstein {

/// L_S[f] = sum_{T subseteq S} (-1)^{|T|} A_{[k]\T} f, a full-home function.
/// Coincides with sum_{T supseteq S} lift(f^{=T}) on every measure.
Fn laplacian(const Fn& f, Subset s);

/// L_S^{<=d}[f] = sum_{T supseteq S, |T| <= d} lift(f^{=T}); needs |S| <= d.
Fn laplacian_trunc(const Fn& f, Subset s, int d);

/// D_{S,x} f = L_S[f](x, .), a function on the link at x. D_empty f = f.
Fn derivative(const Fn& f, Subset s, const PartialAssignment& x);
Fn derivative_trunc(const Fn& f, Subset s, const PartialAssignment& x, int d);

/// I_{S,x}[f] = ||D_{S,x} f||^2 in L^2(mu_x); I_empty = ||f||_2^2.
double influence(const Fn& f, Subset s, const PartialAssignment& x);
double influence_trunc(const Fn& f, Subset s, const PartialAssignment& x, int d);

/// Influences at every x in supp(mu_S), plus aggregates under mu_S.
/// E_x[I_{S,x}] equals ||L_S f||_2^2 exactly.
struct InfluenceProfile {
    Subset subset;
    int trunc_degree = 0;
    std::vector<double> influence;        ///< per marginal point, canonical order
    std::vector<double> influence_trunc;
    double mean = 0.0, mean_sq = 0.0, max = 0.0;
    double mean_trunc = 0.0, mean_sq_trunc = 0.0, max_trunc = 0.0;
};

InfluenceProfile influence_profile(const Fn& f, Subset s, int d);

/// The minimal delta for which f is (d,delta)-global, with the first
/// maximizing restriction in canonical order. S = empty contributes ||f||_2.
struct GlobalnessReport {
    int d = 0;
    double delta_min = 0.0;
    Subset witness_subset;
    std::vector<std::int32_t> witness_x;
};

GlobalnessReport globalness(const Fn& f, int d);

/// Globalness consequences for a (d,delta)-global f:
///  - ||f^{=T}||_inf <= 2^{|T|} delta for every |T| <= d (hard);
///  - E[I_{T,x}^2] <= 2^{d+1} delta^2 E[I_{T,x}] + O_k(eps^2 ||f||_4^4);
///  - E[(I^{<=d}_{T,x})^2] <= 2^{d+4} delta^2 E[I^{<=d}] + O_k(eps^2 ||f||_inf^2 ||f||_2^2).
/// The two influence bounds are hard at eps = 0 and REPORT otherwise.
/// Throws NotGlobal when f is not (d,delta)-global.
std::vector<CheckRecord> check_global_bounds(const Fn& f, int d, double delta, double eps,
                                             const std::string& instance = {});

/// The decomposition {f_S}_{S supseteq T} of L_T[f] built from per-link
/// components of the derivatives: f_S(x,y) = (D_{T,x} f)^{=S\T}(y),
/// with h_S = f. On products it coincides with {f^{=S}}_{S supseteq T}.
/// Declared parameters are the computed minima, so the witness validates.
ApproxESWitness derivative_es_family(const Fn& f, Subset t);

}  // namespace efstein
