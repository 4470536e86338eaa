#include "orbitframes/fibers.hpp"

#include "orbitframes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace orbitframes {

namespace {

MatrixXcd fiber_slice(const MatrixXcd& m, const Universe& u, int g) {
    return m.middleRows(static_cast<Eigen::Index>(g) * u.fiber_dim(), u.fiber_dim());
}

RangeFunction fibers_of_columns(const MatrixXcd& cols, const Universe& u, const Tolerances& tol) {
    RangeFunction rf;
    rf.universe = u;
    const int gc = u.grid_count();
    rf.fibers.resize(static_cast<size_t>(gc));
    rf.dims.resize(static_cast<size_t>(gc));
    rf.gaps.resize(static_cast<size_t>(gc));
    // the rank cutoff is relative to the largest fiber scale, not to each
    // fiber's own sigma_max: a fiber of pure roundoff must come out empty
    double scale = 0.0;
    for (int g = 0; g < gc; ++g)
        scale = std::max(scale, fiber_slice(cols, u, g).norm());
    const double cutoff = tol.fiber_rel_tol * scale;
    for (int g = 0; g < gc; ++g) {
        RankInfo ri;
        rf.fibers[static_cast<size_t>(g)] =
            range_basis_with_cutoff(fiber_slice(cols, u, g), cutoff, &ri);
        rf.dims[static_cast<size_t>(g)] = ri.rank;
        rf.gaps[static_cast<size_t>(g)] = ri.gap();
        if (ri.rank > 0) rf.sigma_support.push_back(g);
    }
    return rf;
}

/// Up-shift of z-coefficient vectors (the fiber-level unilateral shift); the
/// top coefficient is dropped.
MatrixXcd fiber_shift_up(const MatrixXcd& m) {
    MatrixXcd out = MatrixXcd::Zero(m.rows(), m.cols());
    if (m.rows() > 1) out.bottomRows(m.rows() - 1) = m.topRows(m.rows() - 1);
    return out;
}

void normalize_phase(VectorXcd& v) {
    const double scale = v.norm();
    if (scale <= 0.0) return;
    v /= scale;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12) {
            v *= std::conj(v[i]) / std::abs(v[i]);
            break;
        }
    }
}

} // namespace

int RangeFunction::total_dim() const {
    return std::accumulate(dims.begin(), dims.end(), 0);
}

RangeFunction compute_range_function(const std::vector<CoefField>& generators, const Universe& u,
                                     const Tolerances& tol) {
    if (generators.empty())
        throw DomainError("generator list", "range function needs at least one generator");
    MatrixXcd cols(u.dim(), static_cast<Eigen::Index>(generators.size()));
    for (size_t a = 0; a < generators.size(); ++a) {
        if (generators[a].universe != u)
            throw DomainError("universe mismatch", "generator " + std::to_string(a) + " lives elsewhere");
        cols.col(static_cast<Eigen::Index>(a)) = generators[a].vec();
    }
    return fibers_of_columns(cols, u, tol);
}

RangeFunction range_function_of_subspace(const MatrixXcd& basis, const Universe& u, const Tolerances& tol) {
    if (basis.rows() != u.dim())
        throw DomainError("dimension mismatch", "subspace basis rows must equal the universe dimension");
    return fibers_of_columns(basis, u, tol);
}

MatrixXcd subspace_from_fibers(const RangeFunction& rf) {
    const Universe& u = rf.universe;
    const int fd = u.fiber_dim();
    MatrixXcd basis = MatrixXcd::Zero(u.dim(), rf.total_dim());
    Eigen::Index col = 0;
    for (int g = 0; g < u.grid_count(); ++g) {
        const MatrixXcd& jf = rf.fibers[static_cast<size_t>(g)];
        basis.block(static_cast<Eigen::Index>(g) * fd, col, fd, jf.cols()) = jf;
        col += jf.cols();
    }
    return basis;
}

MatrixXcd orbit_span_basis(const std::vector<CoefField>& generators, const Universe& u,
                           const Tolerances& tol) {
    if (generators.empty())
        throw DomainError("generator list", "orbit span needs at least one generator");
    const int nk = u.n_lambda;
    const int nj = u.mode == Mode::bilateral ? u.n2 : 1;
    MatrixXcd cols(u.dim(), static_cast<Eigen::Index>(generators.size()) * nk * nj);
    Eigen::Index c = 0;
    for (const CoefField& gen : generators) {
        if (gen.universe != u)
            throw DomainError("universe mismatch", "generator lives on a different universe");
        VectorXcd base = gen.vec();
        for (int j = 0; j < nj; ++j) {
            VectorXcd x = base;
            for (int k = 0; k < nk; ++k) {
                cols.col(c++) = x;
                x = shift_u_vec(u, x);
            }
            if (u.mode == Mode::bilateral) base = shift_u2_vec(u, base);
        }
    }
    return range_basis(cols, tol.rank_rel_tol);
}

MatrixXcd shift_closed_span_basis(const std::vector<CoefField>& generators, const Universe& u,
                                  const Tolerances& tol) {
    if (u.mode == Mode::bilateral) return orbit_span_basis(generators, u, tol);
    if (generators.empty())
        throw DomainError("generator list", "shift-closed span needs at least one generator");
    MatrixXcd cols(u.dim(), static_cast<Eigen::Index>(generators.size()) * u.n_lambda * u.m_z);
    Eigen::Index c = 0;
    for (const CoefField& gen : generators) {
        if (gen.universe != u)
            throw DomainError("universe mismatch", "generator lives on a different universe");
        VectorXcd base = gen.vec();
        for (int j = 0; j < u.m_z; ++j) {
            VectorXcd x = base;
            for (int k = 0; k < u.n_lambda; ++k) {
                cols.col(c++) = x;
                x = shift_u_vec(u, x);
            }
            base = shift_s_vec(u, base);
        }
    }
    return range_basis(cols, tol.rank_rel_tol);
}

double helson_projection_check(const MatrixXcd& global_basis, const RangeFunction& rf,
                               const CoefField& f) {
    const Universe& u = rf.universe;
    if (f.universe != u)
        throw DomainError("universe mismatch", "field and range function live on different universes");
    VectorXcd v = f.vec();
    VectorXcd global = global_basis * (global_basis.adjoint() * v);
    VectorXcd pointwise = VectorXcd::Zero(v.size());
    const int fd = u.fiber_dim();
    for (int g = 0; g < u.grid_count(); ++g) {
        const MatrixXcd& jf = rf.fibers[static_cast<size_t>(g)];
        if (jf.cols() == 0) continue;
        auto seg = v.segment(static_cast<Eigen::Index>(g) * fd, fd);
        pointwise.segment(static_cast<Eigen::Index>(g) * fd, fd) = jf * (jf.adjoint() * seg);
    }
    return (global - pointwise).norm();
}

double helson_projection_check(const RangeFunction& rf, const CoefField& f) {
    return helson_projection_check(subspace_from_fibers(rf), rf, f);
}

ReducingDefects reducing_defect(const MatrixXcd& basis, const Universe& u, const Tolerances& tol) {
    if (basis.rows() != u.dim())
        throw DomainError("dimension mismatch", "basis rows must equal the universe dimension");
    ReducingDefects d;
    d.gram_defect =
        (basis.adjoint() * basis - MatrixXcd::Identity(basis.cols(), basis.cols())).norm();
    if (d.gram_defect > 1e-10)
        throw DomainError("orthonormal basis", "input basis Gram defect " + std::to_string(d.gram_defect));

    auto defect = [&](const MatrixXcd& moved) {
        return operator_norm(moved - basis * (basis.adjoint() * moved));
    };
    d.u_defect = defect(shift_u_cols(u, basis));
    d.u_star_defect = defect(shift_u_cols(u, basis, true));
    if (u.mode == Mode::unilateral) {
        d.s_star_defect = defect(shift_s_cols(u, basis, true));
    } else {
        d.s_star_defect = std::max(defect(shift_s_cols(u, basis)), defect(shift_s_cols(u, basis, true)));
    }
    d.reducing = d.u_defect <= tol.red_tol && d.u_star_defect <= tol.red_tol;
    d.s_star_invariant = d.s_star_defect <= tol.red_tol;
    return d;
}

InnerFactor extract_inner_factor(const RangeFunction& n_perp, const Universe& u, const Tolerances& tol) {
    if (u.mode != Mode::unilateral || u.n_gen != 1)
        throw DomainError("universe mismatch",
                          "inner factors are extracted on unilateral single-generator universes");
    if (n_perp.universe != u)
        throw DomainError("universe mismatch", "range function lives on a different universe");

    InnerFactor out;
    out.universe = u;
    out.phi.resize(static_cast<size_t>(u.grid_count()));
    out.coverage.assign(static_cast<size_t>(u.grid_count()), FiberCoverage::exact);
    out.sigma_support = n_perp.sigma_support;

    for (int g : n_perp.sigma_support) {
        const MatrixXcd& jf = n_perp.fibers[static_cast<size_t>(g)];
        const Eigen::Index m = jf.rows();
        MatrixXcd sj = fiber_shift_up(jf);
        MatrixXcd sj_basis = range_basis_with_cutoff(sj, tol.fiber_rel_tol);

        // wandering space J - S(J), computed as {Jc : (SJ)^H Jc = 0} so it is
        // meaningful even when truncation clipped the invariance
        MatrixXcd wandering;
        if (sj_basis.cols() == 0) {
            wandering = jf;
        } else {
            MatrixXcd coeff = null_space_with_cutoff(sj_basis.adjoint() * jf, tol.fiber_rel_tol);
            wandering = jf * coeff;
        }

        VectorXcd phi;
        if (wandering.cols() == 1) {
            phi = wandering.col(0);
        } else if (wandering.cols() > 1) {
            throw DomainError("fiber structure",
                              "fiber " + std::to_string(g) + " has wandering dimension " +
                                  std::to_string(wandering.cols()) + "; not of Beurling form");
        } else {
            // clipped fiber: take the minimal-degree line of J
            bool found = false;
            for (Eigen::Index degree = 1; degree <= m && !found; ++degree) {
                if (degree == m) {
                    throw DomainError("fiber structure",
                                      "fiber " + std::to_string(g) + " has no minimal-degree line");
                }
                MatrixXcd tail = jf.bottomRows(m - degree);
                MatrixXcd coeff = null_space_with_cutoff(tail, tol.fiber_rel_tol);
                if (coeff.cols() == 1) {
                    phi = jf * coeff.col(0);
                    found = true;
                } else if (coeff.cols() > 1) {
                    throw DomainError("fiber structure",
                                      "fiber " + std::to_string(g) + " minimal-degree slice has dimension " +
                                          std::to_string(coeff.cols()));
                }
            }
        }

        normalize_phase(phi);

        // exact iff phi is a monomial and its shifted copies give back J
        Eigen::Index nonzero = 0;
        for (Eigen::Index i = 0; i < phi.size(); ++i)
            if (std::abs(phi[i]) > 1e-10) ++nonzero;
        bool exact = nonzero == 1;
        if (exact) {
            MatrixXcd shifts(m, m);
            VectorXcd x = phi;
            for (Eigen::Index j = 0; j < m; ++j) {
                shifts.col(j) = x;
                x = fiber_shift_up(x);
            }
            MatrixXcd span = range_basis_with_cutoff(shifts, tol.fiber_rel_tol);
            exact = subspace_distance(span, jf) <= 1e-8;
        }
        out.phi[static_cast<size_t>(g)] = phi;
        out.coverage[static_cast<size_t>(g)] = exact ? FiberCoverage::exact : FiberCoverage::truncated;
    }
    return out;
}

MatrixXcd resynthesize_from_inner(const InnerFactor& factor, const Tolerances& tol) {
    const Universe& u = factor.universe;
    RangeFunction rf;
    rf.universe = u;
    rf.fibers.resize(static_cast<size_t>(u.grid_count()));
    rf.dims.assign(static_cast<size_t>(u.grid_count()), 0);
    rf.gaps.assign(static_cast<size_t>(u.grid_count()),
                   std::numeric_limits<double>::infinity());
    for (int g : factor.sigma_support) {
        const VectorXcd& phi = factor.phi[static_cast<size_t>(g)];
        const Eigen::Index m = phi.size();
        MatrixXcd shifts(m, m);
        VectorXcd x = phi;
        for (Eigen::Index j = 0; j < m; ++j) {
            shifts.col(j) = x;
            x = fiber_shift_up(x);
        }
        rf.fibers[static_cast<size_t>(g)] = range_basis_with_cutoff(shifts, tol.fiber_rel_tol);
        rf.dims[static_cast<size_t>(g)] = static_cast<int>(rf.fibers[static_cast<size_t>(g)].cols());
        if (rf.dims[static_cast<size_t>(g)] > 0) rf.sigma_support.push_back(g);
    }
    for (int g = 0; g < u.grid_count(); ++g)
        if (rf.fibers[static_cast<size_t>(g)].size() == 0)
            rf.fibers[static_cast<size_t>(g)] = MatrixXcd(u.fiber_dim(), 0);
    return subspace_from_fibers(rf);
}

ChiMask chi_e_detect(const MatrixXcd& basis, const Universe& u, const Tolerances& tol) {
    if (u.mode != Mode::bilateral || u.n_gen != 1)
        throw DomainError("universe mismatch", "chi_E detection needs a bilateral single-generator universe");
    ReducingDefects d = reducing_defect(basis, u, tol);
    if (!d.reducing || !d.s_star_invariant)
        throw DomainError("reducing subspace", "subspace is not U1/U2-reducing (defects " +
                                                   std::to_string(d.u_defect) + ", " +
                                                   std::to_string(d.s_star_defect) + ")");

    RangeFunction rf = range_function_of_subspace(basis, u, tol);
    ChiMask out;
    out.universe = u;
    out.mask.assign(static_cast<size_t>(u.grid_count()), 0);
    for (int g = 0; g < u.grid_count(); ++g) {
        if (rf.dims[static_cast<size_t>(g)] > 1)
            throw DomainError("fiber structure", "fiber dimension " +
                                                     std::to_string(rf.dims[static_cast<size_t>(g)]) +
                                                     " at grid point " + std::to_string(g) +
                                                     " contradicts a single-generator mask");
        out.mask[static_cast<size_t>(g)] = rf.dims[static_cast<size_t>(g)] == 1 ? 1 : 0;
    }

    // double inclusion: columns vanish off E, and e_g in M for g in E
    double residual = 0.0;
    for (int g = 0; g < u.grid_count(); ++g) {
        if (!out.mask[static_cast<size_t>(g)]) {
            residual = std::max(residual, fiber_slice(basis, u, g).norm());
        } else {
            VectorXcd e = VectorXcd::Zero(u.dim());
            e[static_cast<Eigen::Index>(g)] = 1.0;
            residual = std::max(residual, (e - basis * (basis.adjoint() * e)).norm());
        }
    }
    out.inclusion_residual = residual;
    return out;
}

double OperatorField::norm_inf() const {
    double m = 0.0;
    for (const auto& op : ops) m = std::max(m, operator_norm(op));
    return m;
}

OperatorField identity_operator_field(const Universe& u) {
    OperatorField f;
    f.universe = u;
    f.ops.assign(static_cast<size_t>(u.grid_count()),
                 MatrixXcd::Identity(u.fiber_dim(), u.fiber_dim()));
    return f;
}

CoefField apply_operator_field(const OperatorField& field, const CoefField& f) {
    const Universe& u = field.universe;
    if (f.universe != u)
        throw DomainError("universe mismatch", "operator field and field live on different universes");
    if (field.ops.size() != static_cast<size_t>(u.grid_count()))
        throw DomainError("dimension mismatch", "operator field has the wrong number of grid points");
    CoefField out = CoefField::zero(u);
    const int fd = u.fiber_dim();
    for (int g = 0; g < u.grid_count(); ++g) {
        const MatrixXcd& op = field.ops[static_cast<size_t>(g)];
        if (op.rows() != fd || op.cols() != fd)
            throw DomainError("dimension mismatch",
                              "operator at grid point " + std::to_string(g) + " is not fiber-sized");
        out.values.segment(static_cast<Eigen::Index>(g) * fd, fd) =
            op * f.values.segment(static_cast<Eigen::Index>(g) * fd, fd);
    }
    return out;
}

OperatorField adjoint_field(const OperatorField& field) {
    OperatorField out;
    out.universe = field.universe;
    out.ops.reserve(field.ops.size());
    for (const auto& op : field.ops) out.ops.push_back(op.adjoint());
    return out;
}

OperatorField compose_fields(const OperatorField& f, const OperatorField& g) {
    if (f.universe != g.universe)
        throw DomainError("universe mismatch", "operator fields live on different universes");
    OperatorField out;
    out.universe = f.universe;
    out.ops.reserve(f.ops.size());
    for (size_t i = 0; i < f.ops.size(); ++i) out.ops.push_back(f.ops[i] * g.ops[i]);
    return out;
}

} // namespace orbitframes
