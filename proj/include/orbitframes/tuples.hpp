#pragma once

#include "orbitframes/types.hpp"
#include "orbitframes/universe.hpp"

#include <string>
#include <vector>

namespace orbitframes {

/// Index range policy for the orbit system {T^k L^j w_i}.
///
/// cyclic(N, M): k runs over Z_N, which requires T^N = I up to tolerance.
/// j runs over [0, M) in the unilateral case, and over Z_M (with L^M = I)
/// in the bilateral case. This is the exact finite regime: every identity
/// the analysis relies on holds to machine precision.
///
/// truncated(K, J): k in [-K, K], j in [0, J) (unilateral) or [-J, J]
/// (bilateral). A window into the genuinely infinite system; frame bounds
/// come with a convergence history instead of exactness.
struct IterationPolicy {
    enum class Kind { cyclic, truncated };
    Kind kind = Kind::cyclic;
    int n_or_k = 1; // cyclic: N; truncated: K
    int m_or_j = 1; // cyclic: M; truncated: J
};

/// A candidate (H, T, L, {w_i}): finite-dimensional operators plus generator
/// vectors and the iteration-range policy. T must be invertible and commute
/// with L; bilateral variants additionally need L invertible.
struct Tuple {
    int dim_h = 0;
    MatrixXcd T;
    MatrixXcd L;
    std::vector<VectorXcd> generators;
    Mode variant = Mode::unilateral;
    IterationPolicy iteration;

    int n_gen() const { return static_cast<int>(generators.size()); }
};

/// The universe whose index set matches the tuple's iteration policy.
Universe universe_for(const Tuple& t);

struct TupleDiagnostics {
    bool ok = false;
    std::string failed_invariant; // empty when ok
    double commutator_norm = 0.0; // ||TL - LT||_F
    double commutator_scale = 0.0;
    double sigma_min_t = 0.0;
    double sigma_max_t = 0.0;
    double sigma_min_l = 0.0;
    double sigma_max_l = 0.0;
    double cyclic_defect_t = 0.0; // ||T^N - I||_F, cyclic mode
    double cyclic_defect_l = 0.0; // ||L^M - I||_F, bilateral cyclic mode
};

TupleDiagnostics validate_tuple(const Tuple& t, const Tolerances& tol = {});
/// Throws DomainError (named after the violated invariant) when invalid.
void require_valid(const Tuple& t, const Tolerances& tol = {});

/// The orbit vectors T^k L^j w_i, one column per index, ordered
/// lexicographically (k ascending, negatives first in truncated mode, then j,
/// then i). Negative powers use a single factored inverse.
struct OrbitSystem {
    MatrixXcd columns;
    std::vector<BasisIndex> index_map;
};

OrbitSystem orbit_system(const Tuple& t, const Universe& u, const Tolerances& tol = {});

/// Synthesis operator of the orbit system: maps a coefficient field f to
/// sum over (k,j,i) of <f, basis(k,j,i)> T^k L^j w_i. In cyclic mode the
/// column ordering coincides with the universe's Fourier-basis ordering, so
/// `columns` is exactly the matrix of the operator in that basis.
struct SynthesisOp {
    MatrixXcd columns; // dim_h x (#orbit)
    std::vector<BasisIndex> index_map;
    Universe universe;
    Mode variant = Mode::unilateral;
    IterationPolicy iteration;

    /// Matrix of the operator on vec-coordinates (cyclic mode only):
    /// columns * fourier_map(universe).
    MatrixXcd grid_matrix() const;

    /// C f = sum f^i_{kj} T^k L^j w_i (cyclic mode only).
    VectorXcd apply(const CoefField& f) const;
};

SynthesisOp synthesis(const Tuple& t, const Universe& u, const Tolerances& tol = {});

struct BoundHistoryEntry {
    int k = 0;
    int j = 0;
    double lower = 0.0;
    double upper = 0.0;
};

/// Frame analysis of the orbit system via the singular spectrum of the
/// synthesis matrix: A = sigma_min^2 over dim_h values, B = sigma_max^2.
struct FrameReport {
    double lower = 0.0;
    double upper = 0.0;
    bool is_frame = false;
    bool is_parseval = false;
    bool is_riesz = false;
    int kernel_dim = 0;
    VectorXd singular_spectrum;               // decreasing
    std::vector<BoundHistoryEntry> convergence; // truncated mode only
    bool converged = true;
    Tolerances tol;
};

FrameReport frame_bounds(const Tuple& t, const Universe& u, const Tolerances& tol = {});

/// Frame verdicts from an already-computed singular spectrum of a synthesis
/// matrix with `ncols` columns onto a dim_h-dimensional space.
FrameReport frame_report_from_spectrum(const VectorXd& sigma, Eigen::Index ncols, int dim_h,
                                       const Tolerances& tol);

/// Conjugated tuple (H, B T B^-1, B L B^-1, {B w_i}).
Tuple pushforward(const Tuple& t, const MatrixXcd& b_map);

/// Frame report of the pushforward, with the similarity sandwich
/// A/||B^-1||^2 <= A' and B' <= B*||B||^2 checked against the original
/// bounds (DomainError on violation).
FrameReport frame_bounds_of_similar(const Tuple& t, const Universe& u, const MatrixXcd& b_map,
                                    const Tolerances& tol = {});

} // namespace orbitframes
