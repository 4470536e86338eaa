#include "orbitframes/genlab.hpp"

#include "orbitframes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace orbitframes {

namespace {

// vec(BX) = (X^T kron I) vec(B), vec(XB) = (I kron X) vec(B), column-major
MatrixXcd commutator_map(const MatrixXcd& x) {
    const int d = static_cast<int>(x.rows());
    MatrixXcd k = MatrixXcd::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
            // (X^T kron I)[(c,r) block] = X(c', c) on the diagonal of each block
            for (int c2 = 0; c2 < d; ++c2) k(c * d + r, c2 * d + r) += x(c2, c);
            // -(I kron X)
            for (int r2 = 0; r2 < d; ++r2) k(c * d + r, c * d + r2) -= x(r, r2);
        }
    return k;
}

MatrixXcd unvec(const VectorXcd& v, int d) {
    return Eigen::Map<const MatrixXcd>(v.data(), d, d);
}

int find_root(std::vector<int>& parent, int a) {
    while (parent[static_cast<size_t>(a)] != a) {
        parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
        a = parent[static_cast<size_t>(a)];
    }
    return a;
}

} // namespace

std::uint64_t hash_generators(const Tuple& t) {
    std::string bytes;
    for (const auto& w : t.generators) {
        const char* p = reinterpret_cast<const char*>(w.data());
        bytes.append(p, static_cast<size_t>(w.size()) * sizeof(cxd));
    }
    return fnv1a64(bytes);
}

CommutantBasis commutant_basis(const MatrixXcd& t_op, const MatrixXcd& l_op, const Tolerances& tol) {
    if (t_op.rows() != t_op.cols() || l_op.rows() != l_op.cols() || t_op.rows() != l_op.rows())
        throw DomainError("dimension mismatch", "T and L must be square of equal size");
    const int d = static_cast<int>(t_op.rows());

    MatrixXcd stacked(2ll * d * d, 1ll * d * d);
    stacked.topRows(static_cast<Eigen::Index>(d) * d) = commutator_map(t_op);
    stacked.bottomRows(static_cast<Eigen::Index>(d) * d) = commutator_map(l_op);

    MatrixXcd null = null_space(stacked, tol.rank_rel_tol);

    CommutantBasis cb;
    cb.dim_h = d;
    cb.dimension = static_cast<int>(null.cols());
    cb.basis.reserve(static_cast<size_t>(cb.dimension));
    const double scale_t = std::max(t_op.norm(), 1e-300);
    const double scale_l = std::max(l_op.norm(), 1e-300);
    for (int c = 0; c < cb.dimension; ++c) {
        MatrixXcd b = unvec(null.col(c), d);
        cb.max_commutator_residual =
            std::max({cb.max_commutator_residual, (b * t_op - t_op * b).norm() / (scale_t * b.norm()),
                      (b * l_op - l_op * b).norm() / (scale_l * b.norm())});
        cb.basis.push_back(std::move(b));
    }

    // the identity always commutes; its distance to the span is a health check
    VectorXcd id_vec = VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
    for (int i = 0; i < d; ++i) id_vec[static_cast<Eigen::Index>(i) * d + i] = 1.0;
    VectorXcd proj = null * (null.adjoint() * id_vec);
    cb.identity_residual = (id_vec - proj).norm() / id_vec.norm();
    return cb;
}

MatrixXcd sample_invertible_commutant(const CommutantBasis& cb, std::uint64_t seed, int max_tries) {
    if (cb.dimension == 0)
        throw DomainError("commutant", "empty commutant basis");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        MatrixXcd b = MatrixXcd::Zero(cb.dim_h, cb.dim_h);
        for (const auto& e : cb.basis) b += cxd(g(rng), g(rng)) * e;
        VectorXd s = singular_values(b);
        if (s[s.size() - 1] > 1e-6 * s[0]) return b;
    }
    throw DomainError("commutant sampling",
                      "no well-conditioned invertible element found in " + std::to_string(max_tries) +
                          " tries");
}

MembershipVerdict membership_V(const Tuple& base, const VectorXcd& candidate, const Universe& u,
                               const Tolerances& tol) {
    if (base.n_gen() != 1)
        throw DomainError("generator count", "membership test expects a single-generator base tuple");
    if (candidate.size() != base.dim_h)
        throw DomainError("dimension mismatch", "candidate vector length differs from dim_h");

    KernelAnalysis ka_base = analyze_kernel(base, u, tol);
    if (!ka_base.report.is_frame)
        throw DomainError("non-frame", "membership test requires a frame-tuple base");

    Tuple trial = base;
    trial.generators = {candidate};

    MembershipVerdict v;
    v.frame = frame_bounds(trial, u, tol);
    v.in_v = v.frame.is_frame;

    KernelAnalysis ka_trial = analyze_kernel(trial, u, tol);
    v.kernel_distance = subspace_distance(ka_base.n_basis, ka_trial.n_basis);
    v.similar = v.kernel_distance <= tol.sim_tol;
    if (v.in_v && v.similar) v.sim = similarity(base, trial, u, tol);
    v.consistent = v.in_v == v.similar;
    return v;
}

GeneratorClassReport class_census(const std::vector<Tuple>& tuples, const Universe& u,
                                  const Tolerances& tol) {
    if (tuples.empty()) throw DomainError("generator count", "census needs at least one tuple");
    const int n = static_cast<int>(tuples.size());
    const Tuple& first = tuples.front();
    const double scale = std::max({first.T.norm(), first.L.norm(), 1e-300});
    for (const Tuple& t : tuples) {
        if ((t.T - first.T).norm() > 1e-12 * scale || (t.L - first.L).norm() > 1e-12 * scale)
            throw DomainError("mixed operators", "census tuples must share (T, L)");
        if (t.n_gen() != first.n_gen())
            throw DomainError("generator count", "census tuples must share the generator count");
    }

    GeneratorClassReport rep;
    rep.tol = tol;
    std::vector<MatrixXcd> kernels;
    kernels.reserve(tuples.size());
    for (const Tuple& t : tuples) {
        KernelAnalysis ka = analyze_kernel(t, u, tol);
        if (!ka.report.is_frame)
            throw DomainError("non-frame", "census candidates must all be frame-tuples");
        rep.frame_reports.push_back(ka.report);
        rep.candidate_hashes.push_back(hash_generators(t));
        kernels.push_back(std::move(ka.n_basis));
    }

    rep.kernel_distance = MatrixXd::Zero(n, n);
    std::vector<int> parent(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = subspace_distance(kernels[static_cast<size_t>(i)], kernels[static_cast<size_t>(j)]);
            rep.kernel_distance(i, j) = rep.kernel_distance(j, i) = d;
            if (d <= tol.sim_tol)
                parent[static_cast<size_t>(find_root(parent, i))] = find_root(parent, j);
        }

    rep.component.assign(static_cast<size_t>(n), -1);
    int label = 0;
    for (int i = 0; i < n; ++i) {
        int root = find_root(parent, i);
        if (rep.component[static_cast<size_t>(root)] < 0) rep.component[static_cast<size_t>(root)] = label++;
        rep.component[static_cast<size_t>(i)] = rep.component[static_cast<size_t>(root)];
    }
    rep.class_count = label;
    return rep;
}

MultigenCounterexample counterexample_multigen(const Tuple& base, const Tolerances& tol) {
    if (base.n_gen() < 2)
        throw DomainError("generator count", "the construction needs at least two generators");
    const VectorXcd& v0 = base.generators[0];
    const VectorXcd& v1 = base.generators[1];
    MatrixXcd pair(base.dim_h, 2);
    pair << v0, v1;
    VectorXd s = singular_values(pair);
    if (s.size() < 2 || s[1] <= 1e-10 * s[0])
        throw DomainError("independent generators", "v0 and v1 are numerically dependent");

    MultigenCounterexample out;
    out.plus = base;
    out.plus.generators.push_back(v0 + v1);
    out.minus = base;
    out.minus.generators.push_back(v0 - v1);

    Universe u = universe_for(out.plus);
    out.report = class_census({out.plus, out.minus}, u, tol);
    return out;
}

} // namespace orbitframes
