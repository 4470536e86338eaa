#pragma once

#include "orbitframes/types.hpp"
#include "orbitframes/universe.hpp"

#include <cstdint>
#include <vector>

namespace orbitframes {

/// Per-grid-point orthonormal bases J(lambda_t) of a shift-reducing subspace.
/// Fiber g of a matrix in vec-coordinates is its row slice
/// [g*fiber_dim, (g+1)*fiber_dim); a field f belongs to the subspace iff
/// f(grid_g) lies in J(grid_g) at every grid point.
struct RangeFunction {
    Universe universe;
    std::vector<MatrixXcd> fibers; // fiber_dim x dims[g], orthonormal columns
    std::vector<int> dims;
    std::vector<int> sigma_support; // grid points with dims[g] > 0
    std::vector<double> gaps;       // per-fiber rank-decision gap (inf = clean)

    int total_dim() const;
};

/// J(grid_g) = span{f(grid_g) : f in generators}, orthonormalized per grid
/// point by SVD with relative cutoff tol.fiber_rel_tol.
RangeFunction compute_range_function(const std::vector<CoefField>& generators, const Universe& u,
                                     const Tolerances& tol = {});

/// Range function of an explicit subspace basis (vec-coordinates).
RangeFunction range_function_of_subspace(const MatrixXcd& basis, const Universe& u,
                                         const Tolerances& tol = {});

/// Block orthonormal basis of {f : f(grid_g) in J(grid_g) for all g}.
MatrixXcd subspace_from_fibers(const RangeFunction& rf);

/// Global orthonormal basis of span{U^k f_a} (and U2^j bilaterally): one SVD
/// over all shifted generators, independent of the per-fiber route.
MatrixXcd orbit_span_basis(const std::vector<CoefField>& generators, const Universe& u,
                           const Tolerances& tol = {});

/// Smallest U-reducing, S-invariant subspace containing the generators:
/// span{U^k S^j f_a} with the S-powers clipped at the truncation. Bilaterally
/// this coincides with orbit_span_basis.
MatrixXcd shift_closed_span_basis(const std::vector<CoefField>& generators, const Universe& u,
                                  const Tolerances& tol = {});

/// || P_M f - pointwise fiber projection of f ||, the Helson identity
/// residual. The first overload projects with an explicitly supplied global
/// basis; the second assembles it from the fibers.
double helson_projection_check(const MatrixXcd& global_basis, const RangeFunction& rf,
                               const CoefField& f);
double helson_projection_check(const RangeFunction& rf, const CoefField& f);

struct ReducingDefects {
    double gram_defect = 0.0;
    double u_defect = 0.0;      // ||(I-P) U P||   (U1 bilaterally)
    double u_star_defect = 0.0; // ||(I-P) U* P||
    double s_star_defect = 0.0; // ||(I-P) S* P||; bilaterally max of U2/U2* defects
    bool reducing = false;
    bool s_star_invariant = false;
};

/// Defect norms classifying a subspace as shift-reducing / S*-invariant.
/// Throws when the supplied basis is not orthonormal (Gram defect > 1e-10).
ReducingDefects reducing_defect(const MatrixXcd& basis, const Universe& u, const Tolerances& tol = {});

enum class FiberCoverage { exact, truncated };

/// Per-fiber Beurling generators of an S-invariant (U-reducing) subspace,
/// unilateral single-generator universes only. phi[g] has size 0 off the
/// support. A fiber is flagged `exact` when its generator is a monomial
/// whose shifted copies reproduce the fiber — the only truncated polynomials
/// that extend to unimodular functions; everything else is `truncated`.
struct InnerFactor {
    Universe universe;
    std::vector<VectorXcd> phi;           // z-coefficients, first nonzero real positive
    std::vector<FiberCoverage> coverage;
    std::vector<int> sigma_support;
};

/// Extracts the generator of each fiber of n_perp: the wandering vector
/// spanning J - S(J) when the fiber is S-invariant, and the minimal-degree
/// element of J when truncation clipped the invariance. A fiber whose
/// wandering space has dimension > 1, or whose minimal-degree slice is not a
/// line, is not of Beurling form at this truncation -> DomainError.
InnerFactor extract_inner_factor(const RangeFunction& n_perp, const Universe& u,
                                 const Tolerances& tol = {});

/// Rebuilds the subspace spanned per fiber by the shifted copies of the
/// inner generators (z-polynomial multiples within the truncation).
MatrixXcd resynthesize_from_inner(const InnerFactor& factor, const Tolerances& tol = {});

struct ChiMask {
    Universe universe;
    std::vector<std::uint8_t> mask;  // per grid point, t1-major
    double inclusion_residual = 0.0; // double-inclusion defect
};

/// Detects the set E with M = chi_E L^2 for a subspace of a bilateral
/// single-generator universe that reduces U1 and U2. Fails structurally when
/// some fiber dimension leaves {0,1} or the reducing defects exceed tol.
ChiMask chi_e_detect(const MatrixXcd& basis, const Universe& u, const Tolerances& tol = {});

/// Pointwise operator multiplier F-hat: (F-hat f)(grid_g) = F(grid_g) f(grid_g).
/// ops[g] acts on the fiber space (M_z*n_gen, or n_gen bilaterally).
struct OperatorField {
    Universe universe;
    std::vector<MatrixXcd> ops;

    double norm_inf() const; // max_g ||F(grid_g)||
};

OperatorField identity_operator_field(const Universe& u);
CoefField apply_operator_field(const OperatorField& field, const CoefField& f);
/// The pointwise adjoint field, matching (F-hat)^*.
OperatorField adjoint_field(const OperatorField& field);
/// Pointwise composition, matching F-hat G-hat.
OperatorField compose_fields(const OperatorField& f, const OperatorField& g);

} // namespace orbitframes
