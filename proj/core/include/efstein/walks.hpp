#pragma once

#include <vector>

#include "efstein/check.hpp"
#include "efstein/decomposition.hpp"
#include "efstein/measure.hpp"

namespace efstein {

/// T_rho f = sum_S rho^{|S|} (1-rho)^{k-|S|} lift(A_S f). T_0 f is the
/// constant E[f], T_1 f = f.
Fn noise_direct(const Fn& f, double rho);

/// The spectral route: sum_S rho^{|S|} lift(f^{=S}). Agrees with
/// noise_direct on every measure (exact identity).
Fn noise_spectral(const Fn& f, double rho);

/// ||T_rho f||_2^2.
double stability(const Fn& f, double rho);

/// Up-down walk: (1/k) sum_i lift(A_{[k]\{i}} f).
Fn updown(const Fn& f);
/// Spectral route: sum_S ((k-|S|)/k) lift(f^{=S}); equals updown exactly.
Fn updown_spectral(const Fn& f);

/// Codim-1 faces (dropped part i, x in supp(mu_{[k]\{i}})) that extend to a
/// top face of A, weighted by the down-measure mu_down(i,x) = mu_{[k]\{i}}(x)/k.
struct ShadowSet {
    std::vector<std::vector<char>> member;  ///< [dropped part][marginal point]
    double down_mass = 0.0;                 ///< mu_down of the shadow
};

/// Shadow of a Boolean full-home indicator. Throws NotBoolean.
ShadowSet shadow(const Fn& a);

/// Noise upper bound for any f:
///   ||T_rho f||_2^2 <= ||f^{<=d}||_2^2 + rho^d ||f||_2^2 + 2^{4k} eps ||f||_2^2.
/// Hard assertion (the cross terms carry the approximate-Parseval constant).
CheckRecord check_noise_bound(const Fn& f, double rho, int d, double eps,
                              std::string instance = {});

/// Small-set expansion: for Boolean (d,delta)-global f,
///   ||T_rho f||_2^2 <= (rho^d + (100 d)^d delta^2) ||f||_2^2 + O_k(sqrt(eps)) ||f||_2^2.
/// Hard at eps = 0, REPORT with ratio residual/(sqrt(eps) ||f||_2^2) otherwise.
CheckRecord check_sse(const Fn& f, double rho, int d, double delta, double eps,
                      std::string instance = {});

/// Shadow bound: for Boolean (d,delta)-global A with delta <= (200 d)^{-d},
///   mu_down(shadow(A)) >= mu(A) (1 + d/(2k))   [hard at eps = 0]
/// plus the walk identity <f - Tf, f> <= mu_down(shadow) - mu(A) (hard).
/// Returns the main record followed by the walk-identity record.
/// eps above eps_threshold switches the main record to REPORT.
std::vector<CheckRecord> check_kk(const Fn& a, int d, double delta, double eps,
                                  double eps_threshold = 1e-10, std::string instance = {});

}  // namespace efstein
