#include "efstein/operators.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace efstein {

namespace {

constexpr double kSigmaFloor = 1e-12;  // rounding noise on exact products

/// Second singular value of the bipartite conditional operator described
/// by a joint-mass matrix. Rows/columns with zero mass are dropped;
/// values below the floor collapse to 0.
double second_singular(const Eigen::MatrixXd& joint) {
    const Eigen::VectorXd row_mass = joint.rowwise().sum();
    const Eigen::VectorXd col_mass = joint.colwise().sum();
    std::vector<int> rows, cols;
    for (int i = 0; i < joint.rows(); ++i)
        if (row_mass[i] > 0.0) rows.push_back(i);
    for (int j = 0; j < joint.cols(); ++j)
        if (col_mass[j] > 0.0) cols.push_back(j);
    if (rows.size() < 2 || cols.size() < 2) return 0.0;

    Eigen::MatrixXd b(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            b(i, j) = joint(rows[i], cols[j]) /
                      std::sqrt(row_mass[rows[i]] * col_mass[cols[j]]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
    const double s2 = svd.singularValues()[1];
    return s2 < kSigmaFloor ? 0.0 : s2;
}

}  // namespace

Fn avg(const Fn& f, Subset t) {
    const auto& cx = *f.complex();
    const Marginal& ms = cx.marginal(f.home());
    const Marginal& mt = cx.marginal(t);
    if (f.home() == t) return f;
    std::vector<double> num(mt.size(), 0.0);
    for (int z = 0; z < cx.face_count(); ++z)
        num[mt.face_to_point[z]] += cx.weight(z) * f[ms.face_to_point[z]];
    for (int i = 0; i < mt.size(); ++i) num[i] /= mt.mass[i];
    return Fn(f.complex(), t, std::move(num));
}

double opnorm_perp(const WeightedComplex& mu, Subset s, Subset t) {
    const Marginal& ms = mu.marginal(s);
    const Marginal& mt = mu.marginal(t);
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(mt.size(), ms.size());
    for (int z = 0; z < mu.face_count(); ++z)
        joint(mt.face_to_point[z], ms.face_to_point[z]) += mu.weight(z);
    return second_singular(joint);
}

std::vector<const EpsWitness*> EpsCertificate::top(std::size_t n) const {
    std::vector<const EpsWitness*> ptrs;
    ptrs.reserve(witnesses.size());
    for (const auto& w : witnesses) ptrs.push_back(&w);
    std::stable_sort(ptrs.begin(), ptrs.end(),
                     [](const EpsWitness* a, const EpsWitness* b) { return a->sigma2 > b->sigma2; });
    if (ptrs.size() > n) ptrs.resize(n);
    return ptrs;
}

EpsCertificate certify_epsilon(const ComplexPtr& mu, int threads) {
    const int k = mu->part_count();
    if (k < 2) throw InvalidMeasure("certification needs at least two parts");

    struct Task {
        Subset s;
        int point = 0;
        std::size_t witness_offset = 0;
    };
    std::vector<Task> tasks;
    std::size_t total = 0;
    std::vector<std::pair<int, int>> pair_buf;

    for (Subset s : all_subsets(k)) {
        if (s.size() > k - 2) continue;
        const Marginal& m = mu->marginal(s);
        const int free_parts = k - s.size();
        const std::size_t pairs = std::size_t(free_parts) * (free_parts - 1) / 2;
        for (int x = 0; x < m.size(); ++x) {
            tasks.push_back({s, x, total});
            total += pairs;
        }
    }

    EpsCertificate cert;
    cert.witnesses.resize(total);

    // Faces bucketed by marginal point, shared across the pair loop.
    auto run_task = [&](const Task& task) {
        const Marginal& m = mu->marginal(task.s);
        const auto rest = task.s.complement(k).elements();
        auto xp = m.point(task.point);
        std::size_t off = task.witness_offset;
        for (std::size_t a = 0; a < rest.size(); ++a) {
            for (std::size_t b = a + 1; b < rest.size(); ++b) {
                const int pi = rest[a], pj = rest[b];
                Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(
                    mu->universe().part_size(pi), mu->universe().part_size(pj));
                for (int z = 0; z < mu->face_count(); ++z) {
                    if (m.face_to_point[z] != task.point) continue;
                    auto f = mu->face(z);
                    joint(f[pi], f[pj]) += mu->weight(z);
                }
                EpsWitness& w = cert.witnesses[off++];
                w.link_subset = task.s;
                w.x.assign(xp.begin(), xp.end());
                w.part_a = pi;
                w.part_b = pj;
                w.sigma2 = second_singular(joint);
            }
        }
    };

    if (threads <= 1 || tasks.size() < 2) {
        for (const auto& t : tasks) run_task(t);
    } else {
        const int n = std::min<int>(threads, int(tasks.size()));
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (int i = 0; i < n; ++i)
            pool.emplace_back([&] {
                for (std::size_t j = next.fetch_add(1); j < tasks.size();
                     j = next.fetch_add(1))
                    run_task(tasks[j]);
            });
        for (auto& th : pool) th.join();
    }

    for (const auto& w : cert.witnesses) cert.epsilon = std::max(cert.epsilon, w.sigma2);
    return cert;
}

CheckRecord check_disjoint_avg(const Fn& f, Subset t, double eps, std::string instance) {
    const Subset s = f.home();
    if (!(s & t).is_empty()) throw DomainMismatch("check_disjoint_avg needs disjoint S, T");
    Fn a = avg(f, t);
    const double mean = expectation(f);
    Fn centered = a - Fn::constant(f.complex(), t, mean);
    const double lhs = inner(centered, centered);
    const double n2 = inner(f, f);
    const double rhs = double(s.size()) * double(t.size()) * eps * eps * n2;
    CheckRecord r = hard_record("C6-disjoint-averaging", std::move(instance), lhs, rhs);
    r.note = "S=" + s.to_string() + " T=" + t.to_string();
    return r;
}

CheckRecord check_composition(const Fn& f, Subset t1, Subset t2, double eps,
                              std::string instance) {
    Fn g = avg(f, t1);
    Fn h = avg(g, t2);
    Fn base = embed(avg(f, t1 & t2), t2);
    Fn diff = h - base;
    const double lhs = norm_2(diff);
    const double rhs = double(t1.size()) * double(t2.size()) * eps * norm_2(f);
    CheckRecord r = hard_record("C7-composition", std::move(instance), lhs, rhs);
    r.note = "T1=" + t1.to_string() + " T2=" + t2.to_string();
    return r;
}

}  // namespace efstein
