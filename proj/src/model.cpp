#include "orbitframes/model.hpp"

#include "orbitframes/linalg.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace orbitframes {

namespace {

double defect_norm(const MatrixXcd& n_basis, const MatrixXcd& moved) {
    // ||(I - N N^H) moved||
    MatrixXcd d = moved - n_basis * (n_basis.adjoint() * moved);
    return operator_norm(d);
}

} // namespace

KernelAnalysis analyze_kernel(const Tuple& t, const Universe& u, const Tolerances& tol) {
    if (t.iteration.kind != IterationPolicy::Kind::cyclic)
        throw DomainError("iteration mode", "kernel analysis requires cyclic iteration");
    SynthesisOp op = synthesis(t, u, tol);
    KernelAnalysis ka;
    ka.c_grid = op.grid_matrix();

    Eigen::BDCSVD<MatrixXcd> svd(ka.c_grid, Eigen::ComputeFullV);
    const VectorXd& s = svd.singularValues();
    ka.report = frame_report_from_spectrum(s, ka.c_grid.cols(), t.dim_h, tol);

    RankInfo ri;
    ri.sigma_max = s.size() > 0 ? s[0] : 0.0;
    const double cutoff = tol.rank_rel_tol * ri.sigma_max;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] > cutoff) {
            ri.rank = static_cast<int>(i) + 1;
            ri.smallest_kept = s[i];
        } else {
            ri.largest_dropped = s[i];
            break;
        }
    }
    // a singular value within a factor tol.rank_gap_min of the cutoff (on
    // either side) means the kernel dimension is not decidable at this
    // tolerance; refuse rather than guess
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (cutoff > 0.0 && s[i] >= cutoff / tol.rank_gap_min && s[i] <= cutoff * tol.rank_gap_min)
            throw DomainError("kernel rank ambiguity",
                              "singular value " + std::to_string(s[i]) + " within a factor " +
                                  std::to_string(tol.rank_gap_min) + " of the cutoff " +
                                  std::to_string(cutoff));
    }
    ka.rank_info = ri;
    ka.n_basis = svd.matrixV().leftCols(ri.rank);
    return ka;
}

BasicTuple build_basic_tuple(const Tuple& t, const Universe& u, const Tolerances& tol) {
    KernelAnalysis ka = analyze_kernel(t, u, tol);
    if (!ka.report.is_frame)
        throw DomainError("non-frame", "basic tuple construction needs a frame-tuple (A = " +
                                           std::to_string(ka.report.lower) + ")");

    BasicTuple b;
    b.universe = u;
    b.variant = t.variant;
    b.n_basis = std::move(ka.n_basis);
    const MatrixXcd& n = b.n_basis;

    MatrixXcd un = shift_u_cols(u, n);
    MatrixXcd sn = shift_s_cols(u, n);
    b.u_comp = n.adjoint() * un;
    b.s_comp = n.adjoint() * sn;

    b.phis.reserve(u.n_gen);
    for (int i = 0; i < u.n_gen; ++i)
        b.phis.push_back(n.adjoint() * basis_element(u, BasisIndex{0, 0, i}).vec());

    b.c_restricted = ka.c_grid * n;

    InvariantResiduals& r = b.residuals;
    r.orthonormality = (n.adjoint() * n - MatrixXcd::Identity(n.cols(), n.cols())).norm();
    r.u_reduce = defect_norm(n, un);
    r.u_star_reduce = defect_norm(n, shift_u_cols(u, n, true));
    r.s_star_invariance = defect_norm(n, shift_s_cols(u, n, true));
    r.compression_commute = operator_norm(b.u_comp * b.s_comp - b.s_comp * b.u_comp);
    VectorXd cs = singular_values(b.c_restricted);
    r.c_restricted_sigma_min = cs.size() > 0 ? cs[cs.size() - 1] : 0.0;
    r.kernel_gap = ka.rank_info.gap();
    return b;
}

Tuple basic_as_tuple(const BasicTuple& b) {
    Tuple t;
    t.dim_h = b.rank();
    t.T = b.u_comp;
    t.L = b.s_comp;
    t.generators = b.phis;
    t.variant = b.variant;
    t.iteration.kind = IterationPolicy::Kind::cyclic;
    t.iteration.n_or_k = b.universe.n_lambda;
    t.iteration.m_or_j = b.variant == Mode::unilateral ? b.universe.m_z : b.universe.n2;
    return t;
}

double IntertwiningReport::max_relative() const {
    double m = std::max({t_residual, t_inv_residual, l_residual, l_inv_residual});
    return c_norm > 0.0 ? m / c_norm : m;
}

IntertwiningReport intertwining_residuals(const Tuple& t, const Universe& u, const MatrixXcd& c_grid,
                                          const MatrixXcd& n_basis) {
    IntertwiningReport rep;
    rep.c_norm = operator_norm(c_grid);
    const MatrixXcd cn = c_grid * n_basis;

    rep.t_residual = operator_norm(t.T * cn - c_grid * shift_u_cols(u, n_basis));
    MatrixXcd t_inv = t.T.partialPivLu().inverse();
    rep.t_inv_residual = operator_norm(t_inv * cn - c_grid * shift_u_cols(u, n_basis, true));
    rep.l_residual = operator_norm(t.L * cn - c_grid * shift_s_cols(u, n_basis));
    if (t.variant == Mode::bilateral) {
        MatrixXcd l_inv = t.L.partialPivLu().inverse();
        rep.l_inv_residual = operator_norm(l_inv * cn - c_grid * shift_s_cols(u, n_basis, true));
    }
    return rep;
}

IntertwiningReport verify_intertwining(const Tuple& t, const BasicTuple& b, const Tolerances& tol) {
    SynthesisOp op = synthesis(t, b.universe, tol);
    MatrixXcd c_grid = op.grid_matrix();
    // b must describe this very tuple
    double provenance = (c_grid * b.n_basis - b.c_restricted).norm();
    if (provenance > 1e-6 * std::max(1.0, b.c_restricted.norm()))
        throw DomainError("mismatched provenance",
                          "basic tuple was not built from this tuple (residual " +
                              std::to_string(provenance) + ")");
    return intertwining_residuals(t, b.universe, c_grid, b.n_basis);
}

ParsevalCheck verify_parseval_basic(const BasicTuple& b, const Tolerances& tol) {
    ParsevalCheck out;
    Tuple t = basic_as_tuple(b);
    out.report = frame_bounds(t, b.universe, tol);

    // P_N U^k S^j phi_i = U|N^k A^j phi_i, column by column. The left side
    // over all (k,j,i) is (Phi N)^H since the basis elements are the Fourier
    // coordinate vectors.
    const Universe& u = b.universe;
    MatrixXcd lhs = (fourier_map(u) * b.n_basis).adjoint(); // rank x dim
    const int nk = u.n_lambda;
    const int nj = u.mode == Mode::unilateral ? u.m_z : u.n2;
    double worst = 0.0;
    for (int i = 0; i < u.n_gen; ++i) {
        VectorXcd base = b.phis[static_cast<size_t>(i)];
        for (int j = 0; j < nj; ++j) {
            VectorXcd x = base;
            for (int k = 0; k < nk; ++k) {
                worst = std::max(worst, (lhs.col(u.flat(k, j, i)) - x).norm());
                x = b.u_comp * x;
            }
            base = b.s_comp * base;
        }
    }
    out.projection_identity_residual = worst;
    return out;
}

SimilarityVerdict similarity(const Tuple& t1, const Tuple& t2, const Universe& u, const Tolerances& tol) {
    if (t1.n_gen() != t2.n_gen())
        throw DomainError("universe mismatch", "tuples have different generator counts");
    if (t1.dim_h != t2.dim_h)
        throw DomainError("dimension mismatch", "tuples act on spaces of different dimension");
    KernelAnalysis k1 = analyze_kernel(t1, u, tol);
    KernelAnalysis k2 = analyze_kernel(t2, u, tol);
    if (!k1.report.is_frame || !k2.report.is_frame)
        throw DomainError("non-frame", "similarity is decided between frame-tuples only");

    SimilarityVerdict v;
    // ||P_ker1 - P_ker2|| = ||P_N1 - P_N2||
    v.kernel_distance = subspace_distance(k1.n_basis, k2.n_basis);
    v.similar = v.kernel_distance <= tol.sim_tol;
    if (!v.similar) return v;

    MatrixXcd c1n = k1.c_grid * k1.n_basis; // dim_h x dim_h, invertible for frames
    MatrixXcd c2n = k2.c_grid * k1.n_basis;
    v.connecting_map = c1n.transpose()
                           .partialPivLu()
                           .solve(c2n.transpose())
                           .transpose(); // B = C2 N (C1 N)^-1
    v.has_connecting_map = true;

    const MatrixXcd& bm = v.connecting_map;
    const double nb = std::max(operator_norm(bm), 1e-300);
    v.res_t = operator_norm(bm * t1.T - t2.T * bm) / (nb * std::max(operator_norm(t1.T), 1e-300));
    v.res_l = operator_norm(bm * t1.L - t2.L * bm) /
              (nb * std::max({operator_norm(t1.L), operator_norm(t2.L), 1e-300}));
    double worst_gen = 0.0;
    for (int i = 0; i < t1.n_gen(); ++i) {
        double scale = nb * std::max(t1.generators[static_cast<size_t>(i)].norm(), 1e-300);
        worst_gen = std::max(worst_gen,
                             (bm * t1.generators[static_cast<size_t>(i)] - t2.generators[static_cast<size_t>(i)]).norm() / scale);
    }
    v.res_gen = worst_gen;
    v.certified = std::max({v.res_t, v.res_l, v.res_gen}) <= tol.intertwine_rel;
    return v;
}

const char* to_string(RieszClass c) {
    switch (c) {
        case RieszClass::riesz: return "riesz";
        case RieszClass::frame_proper: return "frame_proper";
        default: return "not_frame";
    }
}

RieszClass riesz_classify(const Tuple& t, const Universe& u, const Tolerances& tol) {
    FrameReport rep = frame_bounds(t, u, tol);
    if (!rep.is_frame) return RieszClass::not_frame;
    return rep.kernel_dim == 0 ? RieszClass::riesz : RieszClass::frame_proper;
}

} // namespace orbitframes
