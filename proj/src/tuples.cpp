#include "orbitframes/tuples.hpp"

#include "orbitframes/linalg.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace orbitframes {

namespace {

int cyclic_m(const Tuple& t) { return t.iteration.m_or_j; }

void check_shapes(const Tuple& t) {
    if (t.dim_h <= 0)
        throw DomainError("dimension mismatch", "dim_h must be positive");
    if (t.T.rows() != t.dim_h || t.T.cols() != t.dim_h || t.L.rows() != t.dim_h || t.L.cols() != t.dim_h)
        throw DomainError("dimension mismatch", "T and L must be dim_h x dim_h");
    if (t.generators.empty())
        throw DomainError("dimension mismatch", "at least one generator required");
    for (const auto& w : t.generators)
        if (w.size() != t.dim_h)
            throw DomainError("dimension mismatch", "generator length differs from dim_h");
    if (t.iteration.n_or_k < (t.iteration.kind == IterationPolicy::Kind::cyclic ? 1 : 0) ||
        t.iteration.m_or_j < 1)
        throw DomainError("dimension mismatch", "iteration ranges must be positive");
}

void check_universe_consistency(const Tuple& t, const Universe& u) {
    Universe expect = universe_for(t);
    if (u != expect)
        throw DomainError("universe mismatch",
                          "universe does not match the tuple's iteration policy (expected dim " +
                              std::to_string(expect.dim()) + ", got " + std::to_string(u.dim()) + ")");
}

MatrixXcd matrix_power(const MatrixXcd& a, int n) {
    MatrixXcd r = MatrixXcd::Identity(a.rows(), a.cols());
    for (int i = 0; i < n; ++i) r = a * r;
    return r;
}

FrameReport bounds_from_columns(const MatrixXcd& cols, int dim_h, const Tolerances& tol) {
    return frame_report_from_spectrum(singular_values(cols), cols.cols(), dim_h, tol);
}

} // namespace

FrameReport frame_report_from_spectrum(const VectorXd& sigma, Eigen::Index ncols, int dim_h,
                                       const Tolerances& tol) {
    FrameReport rep;
    rep.tol = tol;
    rep.singular_spectrum = sigma;
    rep.upper = sigma.size() > 0 ? sigma[0] * sigma[0] : 0.0;
    rep.lower = (ncols >= dim_h && sigma.size() >= dim_h) ? sigma[dim_h - 1] * sigma[dim_h - 1] : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma[i] > tol.rank_rel_tol * (sigma.size() > 0 ? sigma[0] : 0.0)) ++rank;
    rep.kernel_dim = static_cast<int>(ncols) - rank;
    rep.is_frame = rep.upper > 0.0 && rep.lower > tol.frame_tol_rel * rep.upper;
    rep.is_parseval =
        rep.is_frame && std::abs(rep.lower - 1.0) <= tol.parseval_tol && std::abs(rep.upper - 1.0) <= tol.parseval_tol;
    rep.is_riesz = rep.is_frame && rep.kernel_dim == 0;
    return rep;
}

Universe universe_for(const Tuple& t) {
    const bool cyclic = t.iteration.kind == IterationPolicy::Kind::cyclic;
    const int n = t.n_gen();
    if (t.variant == Mode::unilateral) {
        int nl = cyclic ? t.iteration.n_or_k : 2 * t.iteration.n_or_k + 1;
        return make_universe(Mode::unilateral, nl, t.iteration.m_or_j, n);
    }
    int nl = cyclic ? t.iteration.n_or_k : 2 * t.iteration.n_or_k + 1;
    int n2 = cyclic ? t.iteration.m_or_j : 2 * t.iteration.m_or_j + 1;
    return make_universe(Mode::bilateral, nl, n2, n);
}

TupleDiagnostics validate_tuple(const Tuple& t, const Tolerances& tol) {
    check_shapes(t);
    TupleDiagnostics d;
    VectorXd st = singular_values(t.T);
    VectorXd sl = singular_values(t.L);
    d.sigma_max_t = st[0];
    d.sigma_min_t = st[st.size() - 1];
    d.sigma_max_l = sl[0];
    d.sigma_min_l = sl[sl.size() - 1];
    d.commutator_norm = (t.T * t.L - t.L * t.T).norm();
    // ||T||*||L|| floored at max(||T||, ||L||) so a numerically-zero factor
    // (e.g. a vanishing compression) does not turn roundoff into a failure
    d.commutator_scale = std::max(t.T.norm() * t.L.norm(), std::max(t.T.norm(), t.L.norm()));

    const bool cyclic = t.iteration.kind == IterationPolicy::Kind::cyclic;
    if (cyclic) {
        d.cyclic_defect_t =
            (matrix_power(t.T, t.iteration.n_or_k) - MatrixXcd::Identity(t.dim_h, t.dim_h)).norm();
        if (t.variant == Mode::bilateral)
            d.cyclic_defect_l =
                (matrix_power(t.L, t.iteration.m_or_j) - MatrixXcd::Identity(t.dim_h, t.dim_h)).norm();
    }

    d.ok = true;
    const double dim_scale = std::sqrt(static_cast<double>(t.dim_h));
    if (d.sigma_min_t <= tol.inv_tol_rel * d.sigma_max_t) {
        d.ok = false;
        d.failed_invariant = "T invertible";
    } else if (d.commutator_norm > tol.comm_tol * std::max(d.commutator_scale, 1e-300)) {
        d.ok = false;
        d.failed_invariant = "TL = LT";
    } else if (t.variant == Mode::bilateral && d.sigma_min_l <= tol.inv_tol_rel * d.sigma_max_l) {
        d.ok = false;
        d.failed_invariant = "L invertible";
    } else if (cyclic && d.cyclic_defect_t > 1e-6 * dim_scale) {
        d.ok = false;
        d.failed_invariant = "T^N = I";
    } else if (cyclic && t.variant == Mode::bilateral && d.cyclic_defect_l > 1e-6 * dim_scale) {
        d.ok = false;
        d.failed_invariant = "L^M = I";
    }
    return d;
}

void require_valid(const Tuple& t, const Tolerances& tol) {
    TupleDiagnostics d = validate_tuple(t, tol);
    if (!d.ok)
        throw DomainError(d.failed_invariant, "tuple failed validation (commutator " +
                                                  std::to_string(d.commutator_norm) + ", sigma_min(T) " +
                                                  std::to_string(d.sigma_min_t) + ")");
}

OrbitSystem orbit_system(const Tuple& t, const Universe& u, const Tolerances& tol) {
    require_valid(t, tol);
    check_universe_consistency(t, u);

    const bool cyclic = t.iteration.kind == IterationPolicy::Kind::cyclic;
    const int n = t.n_gen();
    const int k_lo = cyclic ? 0 : -t.iteration.n_or_k;
    const int k_hi = cyclic ? t.iteration.n_or_k - 1 : t.iteration.n_or_k;
    const bool bilateral = t.variant == Mode::bilateral;
    const int j_lo = (!cyclic && bilateral) ? -t.iteration.m_or_j : 0;
    const int j_hi = cyclic ? cyclic_m(t) - 1 : (bilateral ? t.iteration.m_or_j : t.iteration.m_or_j - 1);
    const int nk = k_hi - k_lo + 1;
    const int nj = j_hi - j_lo + 1;

    MatrixXcd t_inv, l_inv;
    if (k_lo < 0) t_inv = t.T.partialPivLu().inverse();
    if (j_lo < 0) l_inv = t.L.partialPivLu().inverse();

    OrbitSystem sys;
    sys.columns.resize(t.dim_h, static_cast<Eigen::Index>(nk) * nj * n);
    sys.index_map.resize(static_cast<size_t>(nk) * nj * n);

    auto col_at = [&](int k, int j, int i) {
        return ((k - k_lo) * nj + (j - j_lo)) * n + i;
    };

    for (int i = 0; i < n; ++i) {
        // L^j w_i for the whole j-window, from j = 0 outward
        std::vector<VectorXcd> lpow(static_cast<size_t>(nj));
        lpow[static_cast<size_t>(-j_lo)] = t.generators[i];
        for (int j = 1; j <= j_hi; ++j)
            lpow[static_cast<size_t>(j - j_lo)] = t.L * lpow[static_cast<size_t>(j - 1 - j_lo)];
        for (int j = -1; j >= j_lo; --j)
            lpow[static_cast<size_t>(j - j_lo)] = l_inv * lpow[static_cast<size_t>(j + 1 - j_lo)];

        for (int j = j_lo; j <= j_hi; ++j) {
            VectorXcd x = lpow[static_cast<size_t>(j - j_lo)];
            sys.columns.col(col_at(0, j, i)) = x;
            for (int k = 1; k <= k_hi; ++k) {
                x = t.T * x;
                sys.columns.col(col_at(k, j, i)) = x;
            }
            x = lpow[static_cast<size_t>(j - j_lo)];
            for (int k = -1; k >= k_lo; --k) {
                x = t_inv * x;
                sys.columns.col(col_at(k, j, i)) = x;
            }
        }
    }

    for (int k = k_lo; k <= k_hi; ++k)
        for (int j = j_lo; j <= j_hi; ++j)
            for (int i = 0; i < n; ++i)
                sys.index_map[static_cast<size_t>(col_at(k, j, i))] = BasisIndex{k, j, i};
    return sys;
}

MatrixXcd SynthesisOp::grid_matrix() const {
    if (iteration.kind != IterationPolicy::Kind::cyclic)
        throw DomainError("iteration mode", "grid_matrix requires cyclic iteration");
    return columns * fourier_map(universe);
}

VectorXcd SynthesisOp::apply(const CoefField& f) const {
    if (iteration.kind != IterationPolicy::Kind::cyclic)
        throw DomainError("iteration mode", "synthesis application requires cyclic iteration");
    if (f.universe != universe)
        throw DomainError("universe mismatch", "field universe differs from the synthesis universe");
    return columns * f.coeffs();
}

SynthesisOp synthesis(const Tuple& t, const Universe& u, const Tolerances& tol) {
    OrbitSystem sys = orbit_system(t, u, tol);
    SynthesisOp op;
    op.columns = std::move(sys.columns);
    op.index_map = std::move(sys.index_map);
    op.universe = u;
    op.variant = t.variant;
    op.iteration = t.iteration;
    return op;
}

FrameReport frame_bounds(const Tuple& t, const Universe& u, const Tolerances& tol) {
    SynthesisOp op = synthesis(t, u, tol);
    FrameReport rep = bounds_from_columns(op.columns, t.dim_h, tol);

    if (t.iteration.kind == IterationPolicy::Kind::truncated) {
        // nested sub-windows; the frame operator grows with the window, so
        // both bounds must be nondecreasing
        const int levels = 4;
        const int K = t.iteration.n_or_k, J = t.iteration.m_or_j;
        const bool bilateral = t.variant == Mode::bilateral;
        for (int l = 1; l <= levels; ++l) {
            int kl = (K * l + levels - 1) / levels;
            int jl = std::max(1, (J * l + levels - 1) / levels);
            std::vector<Eigen::Index> keep;
            for (size_t c = 0; c < op.index_map.size(); ++c) {
                const BasisIndex& b = op.index_map[c];
                bool in_k = std::abs(b.k) <= kl;
                bool in_j = bilateral ? std::abs(b.j) <= jl : (b.j >= 0 && b.j < jl);
                if (in_k && in_j) keep.push_back(static_cast<Eigen::Index>(c));
            }
            MatrixXcd sub(t.dim_h, keep.size());
            for (size_t c = 0; c < keep.size(); ++c) sub.col(c) = op.columns.col(keep[c]);
            FrameReport r = bounds_from_columns(sub, t.dim_h, tol);
            rep.convergence.push_back({kl, jl, r.lower, r.upper});
        }
        for (size_t l = 1; l < rep.convergence.size(); ++l)
            if (rep.convergence[l].upper < rep.convergence[l - 1].upper * (1.0 - 1e-12))
                throw DomainError("bound monotonicity",
                                  "upper frame bound decreased while enlarging the window");
        if (rep.convergence.size() >= 2) {
            const auto& a = rep.convergence[rep.convergence.size() - 2];
            const auto& b = rep.convergence.back();
            rep.converged = b.upper <= a.upper * (1.0 + 1e-6);
        }
    }
    return rep;
}

Tuple pushforward(const Tuple& t, const MatrixXcd& b_map) {
    if (b_map.rows() != t.dim_h || b_map.cols() != t.dim_h)
        throw DomainError("dimension mismatch", "push-forward map must be dim_h x dim_h");
    VectorXd s = singular_values(b_map);
    if (s[s.size() - 1] <= 1e-13 * s[0])
        throw DomainError("B invertible", "push-forward map is numerically singular");
    MatrixXcd b_inv = b_map.partialPivLu().inverse();
    Tuple out = t;
    out.T = b_map * t.T * b_inv;
    out.L = b_map * t.L * b_inv;
    for (auto& w : out.generators) w = b_map * w;
    return out;
}

FrameReport frame_bounds_of_similar(const Tuple& t, const Universe& u, const MatrixXcd& b_map,
                                    const Tolerances& tol) {
    FrameReport base = frame_bounds(t, u, tol);
    Tuple moved = pushforward(t, b_map);
    FrameReport rep = frame_bounds(moved, u, tol);

    const double nb = operator_norm(b_map);
    const double nbi = operator_norm(b_map.partialPivLu().inverse());
    const double slack = 1e-8;
    if (rep.lower < base.lower / (nbi * nbi) * (1.0 - slack) - slack ||
        rep.upper > base.upper * nb * nb * (1.0 + slack) + slack)
        throw DomainError("similarity sandwich",
                          "pushed-forward bounds escape [A/||B^-1||^2, B*||B||^2]");
    return rep;
}

} // namespace orbitframes
