#pragma once

#include "orbitframes/linalg.hpp"
#include "orbitframes/tuples.hpp"

namespace orbitframes {

/// Residuals of the defining properties of a basic tuple, all operator norms.
struct InvariantResiduals {
    double orthonormality = 0.0;      // ||N^H N - I||
    double u_reduce = 0.0;            // ||(I-P) U N||
    double u_star_reduce = 0.0;       // ||(I-P) U* N||
    double s_star_invariance = 0.0;   // ||(I-P) S* N|| (U2* bilaterally)
    double compression_commute = 0.0; // ||U_N A - A U_N||
    double c_restricted_sigma_min = 0.0;
    double kernel_gap = 0.0;          // kept/dropped singular-value ratio
};

/// The canonical model of a frame-tuple: N = ker(C)^perp with the compressed
/// shifts and projected canonical generators, everything expressed in the
/// orthonormal columns of `n_basis` (vec-coordinates of the universe).
///
/// u_comp is U|N (U1|N bilaterally) and s_comp is the compression of S-hat
/// (U2|N bilaterally); phis[i] = P_N phi_i; c_restricted is the isomorphism
/// C|N onto the tuple's space.
struct BasicTuple {
    Universe universe;
    Mode variant = Mode::unilateral;
    MatrixXcd n_basis;
    MatrixXcd u_comp;
    MatrixXcd s_comp;
    std::vector<VectorXcd> phis;
    MatrixXcd c_restricted;
    InvariantResiduals residuals;

    int rank() const { return static_cast<int>(n_basis.cols()); }
};

/// Kernel analysis of the synthesis operator, shared by the model builders.
struct KernelAnalysis {
    MatrixXcd n_basis;   // orthonormal basis of ker(C)^perp
    MatrixXcd c_grid;    // synthesis matrix on vec-coordinates
    FrameReport report;
    RankInfo rank_info;
};

/// SVD of the synthesis matrix with the relative cutoff tol.rank_rel_tol.
/// Throws on rank-decision ambiguity (spectral gap below tol.rank_gap_min)
/// rather than guessing. Cyclic iteration only.
KernelAnalysis analyze_kernel(const Tuple& t, const Universe& u, const Tolerances& tol = {});

/// Constructs the basic tuple of a frame-tuple. Throws DomainError for
/// non-frame input or an ambiguous kernel rank decision.
BasicTuple build_basic_tuple(const Tuple& t, const Universe& u, const Tolerances& tol = {});

/// The basic tuple viewed as an ordinary tuple (C^rank, U|N, A, {phi_i}),
/// cyclic over the owning universe.
Tuple basic_as_tuple(const BasicTuple& b);

struct IntertwiningReport {
    double c_norm = 0.0;        // ||C||
    double t_residual = 0.0;    // ||(T C - C U) N||
    double t_inv_residual = 0.0;
    double l_residual = 0.0;    // ||(L C - C S) N||, bilateral: j-shift
    double l_inv_residual = 0.0; // bilateral only

    double max_relative() const;
};

/// Residuals of T C = C U, T^-1 C = C U*, L C = C S restricted to N.
/// Throws "mismatched provenance" when b was not built from t.
IntertwiningReport verify_intertwining(const Tuple& t, const BasicTuple& b, const Tolerances& tol = {});

/// Core of verify_intertwining on an explicit synthesis matrix; lets tests
/// exercise corrupted operators.
IntertwiningReport intertwining_residuals(const Tuple& t, const Universe& u, const MatrixXcd& c_grid,
                                          const MatrixXcd& n_basis);

struct ParsevalCheck {
    FrameReport report;                    // bounds of {U|N^k A^j phi_i}
    double projection_identity_residual;   // max_col |P_N U^k S^j phi_i - U|N^k A^j phi_i|
};

/// Every basic tuple is a Parseval-tuple: checks the frame bounds of the
/// compressed system and the column-by-column projection identity.
ParsevalCheck verify_parseval_basic(const BasicTuple& b, const Tolerances& tol = {});

/// Similarity decision via equality of synthesis kernels. When similar, the
/// connecting map B = C2|N (C1|N)^-1 is returned along with its intertwining
/// residuals; `certified` means those residuals meet tol.intertwine_rel.
struct SimilarityVerdict {
    bool similar = false;
    double kernel_distance = 1.0;
    bool has_connecting_map = false;
    MatrixXcd connecting_map;
    double res_t = 0.0;   // ||B T1 - T2 B|| / (||B|| ||T1||)
    double res_l = 0.0;
    double res_gen = 0.0; // max_i ||B w1_i - w2_i|| / ||B|| ||w1_i||
    bool certified = false;
};

SimilarityVerdict similarity(const Tuple& t1, const Tuple& t2, const Universe& u,
                             const Tolerances& tol = {});

enum class RieszClass { riesz, frame_proper, not_frame };

const char* to_string(RieszClass c);

/// riesz: frame with trivial synthesis kernel; frame_proper: frame with a
/// nontrivial kernel; not_frame otherwise.
RieszClass riesz_classify(const Tuple& t, const Universe& u, const Tolerances& tol = {});

} // namespace orbitframes
