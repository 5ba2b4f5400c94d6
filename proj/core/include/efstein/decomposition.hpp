#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "efstein/measure.hpp"
#include "efstein/operators.hpp"

namespace efstein {

/// The indexed family {f^{=S}} (or a candidate approximate family).
/// Components are stored junta-reduced with home S and lifted on demand.
class EfronSteinFamily {
  public:
    explicit EfronSteinFamily(std::uint64_t complex_id) : complex_id_(complex_id) {}

    std::uint64_t complex_id() const { return complex_id_; }
    bool has(Subset s) const { return comps_.count(s.bits()) > 0; }
    const Fn& at(Subset s) const;
    void set(Subset s, Fn component);
    const std::map<std::uint32_t, Fn>& components() const { return comps_; }

  private:
    std::uint64_t complex_id_;
    std::map<std::uint32_t, Fn> comps_;  // keyed by bitmask, ascending
};

/// f^{=S} via the alternating averaging formula
///   f^{=S} = sum_{T subseteq S} (-1)^{|S\T|} A_T f
/// for a full-home f. ||f^{=S}||_2 <= 2^{|S|} ||f||_2.
Fn es_component(const Fn& f, Subset s);

/// All 2^k components; each A_T f is computed once and shared.
EfronSteinFamily es_all(const Fn& f);

/// sum_{|S| <= d} lift(f^{=S}); with d = k this reconstructs f exactly.
Fn low_degree(const EfronSteinFamily& family, int d);

/// | <f,g> - sum_S <f^{=S}, g^{=S}> | with component inner products taken
/// in L^2(mu_S). Bounded by 2^{4k} eps ||f||_2 ||g||_2.
double parseval_defect(const Fn& f, const Fn& g);

/// | <lift f^{=S}, lift g^{=T}> |; for S != T bounded by
/// 2^{2|S|+2|T|} eps ||f||_2 ||g||_2.
double near_orthogonality_defect(const Fn& f, const Fn& g, Subset s, Subset t);

/// || (f^{=S})^{=T} ||_2 for T != S, or || (f^{=S})^{=S} - f^{=S} ||_2 for
/// T = S. Bounded by 2^{4k} eps ||f||_2 resp. 2^{5k} eps ||f||_2 (squared
/// forms 2^{8k}, 2^{10k}).
double idempotence_defect(const Fn& f, Subset s, Subset t);

/// A candidate approximate decomposition {f_S} with witnesses h_S and its
/// declared parameters. Conditions:
///   ||f||_2 <= alpha, ||f - sum_S f_S||_2 <= eps_prime,
///   ||h_S||_2 <= alpha, ||h_S^{=S} - f_S||_2 <= eps_prime for each S,
/// and, when beta is present, ||h_S^{=S}||_inf, ||f_S||_inf, ||f||_inf <= beta.
struct ApproxESWitness {
    EfronSteinFamily family;
    std::map<std::uint32_t, Fn> witnesses;  ///< h_S, full home
    double alpha = 0.0;
    double eps_prime = 0.0;
    std::optional<double> beta;
};

struct WitnessBounds {
    double alpha_min = 0.0;
    double eps_prime_min = 0.0;
    double beta_min = 0.0;

    bool dominated_by(const ApproxESWitness& w, double tol = 1e-9) const;
};

/// Tightest (alpha, eps', beta) for which {f_S} with witnesses {h_S} is an
/// approximate decomposition of f. MissingWitness if some f_S has no h_S.
WitnessBounds validate_approx_es(const Fn& f, const ApproxESWitness& w);

/// | <f,g> - sum_S <f_S, g_S> | for two approximate decompositions.
/// Bounded by 2^{6k} (eps1 alpha2 + eps2 alpha1 + eps alpha1 alpha2).
double strong_parseval_defect(const Fn& f, const Fn& g, const ApproxESWitness& wf,
                              const ApproxESWitness& wg);

/// Measured left-hand sides of the four L4-closeness bounds between two
/// bounded approximate decompositions of the same f, with right-hand sides
/// of the form ceiling * (eps'-term + eps-term); the O_k constant is not
/// explicit, so these are tracked, never hard-asserted. Parts 1 and 2 are
/// taken at the given S; parts 3 and 4 are global.
struct L4Closeness {
    std::array<double, 4> lhs{};
    std::array<double, 4> rhs_shape{};  ///< ceiling already applied
    std::array<std::optional<double>, 4> ratio{};
};

L4Closeness l4_closeness_defect(const Fn& f, const ApproxESWitness& w1,
                                const ApproxESWitness& w2, Subset s, double eps,
                                double ceiling);

}  // namespace efstein
