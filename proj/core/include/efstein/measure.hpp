#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "efstein/errors.hpp"
#include "efstein/subset.hpp"

namespace efstein {

/// The k finite label sets V_0 ... V_{k-1}.
class PartiteUniverse {
  public:
    explicit PartiteUniverse(std::vector<std::vector<std::string>> parts);

    /// Parts of the given sizes with labels "0", "1", ...
    static PartiteUniverse with_sizes(std::span<const int> sizes);

    int part_count() const { return int(parts_.size()); }
    int part_size(int i) const { return int(parts_[i].size()); }
    const std::vector<std::string>& labels(int i) const { return parts_[i]; }

    /// Universe restricted to the parts in `keep` (ascending order).
    PartiteUniverse restricted(Subset keep) const;

  private:
    std::vector<std::vector<std::string>> parts_;
};

/// A partial assignment: one element index per part in `subset`,
/// listed in ascending part order.
struct PartialAssignment {
    Subset subset;
    std::vector<std::int32_t> coords;
};

/// Support of a marginal mu_S together with the index machinery used by
/// every operator: canonical (lexicographic) point order, per-point mass,
/// and the projection map from top faces to points.
struct Marginal {
    Subset subset;
    int arity = 0;                           ///< |S|
    std::vector<std::int32_t> coords;        ///< point coords, flat, n * arity, lex sorted
    std::vector<double> mass;                ///< mu_S per point, positive
    std::vector<std::int32_t> face_to_point; ///< top face index -> point index
    std::vector<std::int32_t> rep_face;      ///< first face projecting to each point

    int size() const { return int(mass.size()); }
    std::span<const std::int32_t> point(int idx) const {
        return {coords.data() + std::size_t(idx) * arity, std::size_t(arity)};
    }
    /// Index of the point with the given coords, or -1. Binary search.
    int find(std::span<const std::int32_t> c) const;
};

class WeightedComplex;
using ComplexPtr = std::shared_ptr<const WeightedComplex>;

enum class WeightPolicy {
    Strict,      ///< reject when the raw sum deviates from 1 by more than 1e-6
    Renormalize  ///< accept any positive total and normalize
};

/// A probability measure mu on the top faces of a k-partite universe.
/// Immutable after construction; faces are held in canonical lexicographic
/// order and weights are normalized to sum to 1.
class WeightedComplex {
  public:
    static constexpr int kMaxParts = 12;  // subset enumeration is 2^k

    /// Zero-weight faces are dropped; duplicate faces and negative weights
    /// are rejected. Faces are index tuples, one element index per part.
    static ComplexPtr create(PartiteUniverse universe,
                             std::vector<std::vector<std::int32_t>> faces,
                             std::vector<double> weights,
                             WeightPolicy policy = WeightPolicy::Renormalize);

    int part_count() const { return k_; }
    int face_count() const { return int(weights_.size()); }
    std::span<const std::int32_t> face(int idx) const {
        return {faces_.data() + std::size_t(idx) * k_, std::size_t(k_)};
    }
    double weight(int idx) const { return weights_[idx]; }
    std::span<const double> weights() const { return weights_; }
    const PartiteUniverse& universe() const { return universe_; }

    /// Content hash; two complexes with identical parts, faces and weights
    /// share an id. Functions are composable only within one id.
    std::uint64_t id() const { return id_; }

    /// Marginal support of mu_S (cached, thread-safe).
    const Marginal& marginal(Subset s) const;

  private:
    WeightedComplex(PartiteUniverse u, std::vector<std::int32_t> faces,
                    std::vector<double> weights);

    int k_;
    PartiteUniverse universe_;
    std::vector<std::int32_t> faces_;  // flat, n * k
    std::vector<double> weights_;
    std::uint64_t id_;

    mutable std::shared_mutex cache_mutex_;
    mutable std::unordered_map<std::uint32_t, std::unique_ptr<Marginal>> marginal_cache_;
};

/// mu_S as a standalone complex on the parts of S.
ComplexPtr marginal_complex(const ComplexPtr& mu, Subset s);

/// The link mu_x on the complementary parts; requires mu_S(x) > 0.
/// An empty assignment returns mu itself.
ComplexPtr link(const ComplexPtr& mu, const PartialAssignment& x);

/// A real-valued function on the support of mu_home, aligned to the
/// canonical point order. Value vectors are dense.
class Fn {
  public:
    Fn(ComplexPtr cx, Subset home, std::vector<double> values);
    static Fn constant(ComplexPtr cx, Subset home, double c);

    const ComplexPtr& complex() const { return cx_; }
    Subset home() const { return home_; }
    int size() const { return int(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    bool same_domain(const Fn& o) const {
        return cx_->id() == o.cx_->id() && home_ == o.home_;
    }

    Fn& operator+=(const Fn& o);
    Fn& operator-=(const Fn& o);
    Fn& operator*=(double c);
    friend Fn operator+(Fn a, const Fn& b) { return a += b; }
    friend Fn operator-(Fn a, const Fn& b) { return a -= b; }
    friend Fn operator*(double c, Fn a) { return a *= c; }

  private:
    ComplexPtr cx_;
    Subset home_;
    std::vector<double> values_;
};

/// Deterministic pairwise-tree sum over the given terms (canonical order).
double pairwise_sum(std::span<const double> terms);

double inner(const Fn& f, const Fn& g);
double expectation(const Fn& f);
double norm_2(const Fn& f);
double norm_4(const Fn& f);
double norm_inf(const Fn& f);
/// p in {4/3, 2, 4}; use norm_inf for the sup norm.
double norm_p(const Fn& f, double p);

/// g with home S viewed on supp mu_T for S subseteq T.
Fn embed(const Fn& g, Subset super);
/// g lifted to home [k]: lift(g)(y) = g(y_S).
Fn lift(const Fn& g);
/// y -> f(x,y): for f with home T and x on S (S subseteq T), the function
/// on the link of mu at x with home T \ S (in link part indexing).
/// An empty assignment returns f itself.
Fn restrict_fix(const Fn& f, const PartialAssignment& x);

/// Verifies that a Boolean-valued function is within tol of {0,1}.
bool is_boolean(const Fn& f, double tol = 1e-9);

}  // namespace efstein
