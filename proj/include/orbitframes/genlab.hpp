#pragma once

#include "orbitframes/model.hpp"
#include "orbitframes/tuples.hpp"

#include <cstdint>
#include <vector>

namespace orbitframes {

/// Frobenius-orthonormal basis of {B : BT = TB and BL = LB}, computed as the
/// null space of the stacked commutator maps on the dim_h^2 matrix space.
struct CommutantBasis {
    int dim_h = 0;
    std::vector<MatrixXcd> basis;
    int dimension = 0;
    double max_commutator_residual = 0.0; // worst ||BT-TB||_F, ||BL-LB||_F over the basis
    double identity_residual = 0.0;       // distance of I to the span
};

CommutantBasis commutant_basis(const MatrixXcd& t_op, const MatrixXcd& l_op, const Tolerances& tol = {});

/// Random element of the commutant with unit-variance complex Gaussian
/// coefficients, redrawn until sigma_min(B) > 1e-6 sigma_max(B).
/// Deterministic for a fixed seed; DomainError when max_tries runs out.
MatrixXcd sample_invertible_commutant(const CommutantBasis& cb, std::uint64_t seed, int max_tries = 64);

/// Membership of v in the single-generator frame set of (H, T, L): the frame
/// verdict of (H,T,L,v) and the kernel-similarity verdict against the base
/// tuple are computed independently; `consistent` records whether the two
/// pathways agree (a disagreement is a tolerance failure, surfaced verbatim).
struct MembershipVerdict {
    bool in_v = false;
    bool similar = false;
    double kernel_distance = 1.0;
    bool consistent = false;
    FrameReport frame;
    SimilarityVerdict sim; // populated when both tuples are frames
};

MembershipVerdict membership_V(const Tuple& base, const VectorXcd& candidate, const Universe& u,
                               const Tolerances& tol = {});

/// Pairwise similarity classification of generator sets over a shared (T, L).
struct GeneratorClassReport {
    std::vector<std::uint64_t> candidate_hashes;
    std::vector<FrameReport> frame_reports;
    MatrixXd kernel_distance; // symmetric, zero diagonal
    std::vector<int> component; // class label per candidate
    int class_count = 0;        // lower bound on the number of classes
    std::uint64_t seed = 0;
    Tolerances tol;
};

/// The two (n+1)-generator extensions {v_i} + {v0+v1} and {v_i} + {v0-v1} of
/// a frame-tuple with independent v0, v1: both are frames, and they are never
/// similar. Returns the extended tuples along with their classification.
struct MultigenCounterexample {
    Tuple plus;
    Tuple minus;
    GeneratorClassReport report;
};

MultigenCounterexample counterexample_multigen(const Tuple& base, const Tolerances& tol = {});

GeneratorClassReport class_census(const std::vector<Tuple>& tuples, const Universe& u,
                                  const Tolerances& tol = {});

/// Stable content digest of a generator set, for report references.
std::uint64_t hash_generators(const Tuple& t);

} // namespace orbitframes
