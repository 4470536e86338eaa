#pragma once

#include "orbitframes/types.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace orbitframes {

/// Outcome of an SVD-based rank decision, plus the spectral-gap evidence.
struct RankInfo {
    int rank = 0;
    double sigma_max = 0.0;
    double smallest_kept = 0.0;
    double largest_dropped = 0.0;

    /// smallest kept / largest dropped; +inf when nothing was dropped.
    double gap() const;
};

/// Orthonormal basis of the column space of A (relative SVD cutoff).
MatrixXcd range_basis(const MatrixXcd& a, double rel_tol, RankInfo* info = nullptr);

/// Same with an absolute singular-value cutoff, for matrices whose natural
/// scale is known (for example blocks of an orthonormal basis, where a fiber
/// of pure roundoff must count as rank zero).
MatrixXcd range_basis_with_cutoff(const MatrixXcd& a, double abs_cutoff, RankInfo* info = nullptr);

/// Orthonormal basis of ker(A).
MatrixXcd null_space(const MatrixXcd& a, double rel_tol, RankInfo* info = nullptr);
MatrixXcd null_space_with_cutoff(const MatrixXcd& a, double abs_cutoff, RankInfo* info = nullptr);

/// Orthonormal basis of ker(A)^perp = the row space (right singular vectors
/// with sigma above the cutoff).
MatrixXcd corange_basis(const MatrixXcd& a, double rel_tol, RankInfo* info = nullptr);

/// Operator (spectral) norm.
double operator_norm(const MatrixXcd& a);

/// ||P1 - P2||_2 for the orthogonal projectors onto the column spans of the
/// two orthonormal-column matrices. Equals the sine of the largest principal
/// angle when the spans have equal dimension, and 1 when they differ.
/// Computed on span([B1 B2]), so cost is O(dim * (r1+r2)^2).
double subspace_distance(const MatrixXcd& b1, const MatrixXcd& b2);

/// Singular values of A in decreasing order.
VectorXd singular_values(const MatrixXcd& a);

/// Haar-like random unitary (QR of a complex Gaussian matrix).
MatrixXcd random_unitary(int n, std::mt19937_64& rng);

/// Random invertible matrix with condition number exactly `cond`:
/// U diag(s) V^H with log-uniform singular values in [1/sqrt(cond), sqrt(cond)].
MatrixXcd random_conditioned(int n, double cond, std::mt19937_64& rng);

VectorXcd random_complex_vector(int n, std::mt19937_64& rng);
MatrixXcd random_complex_matrix(int rows, int cols, std::mt19937_64& rng);

/// FNV-1a 64-bit digest, used for stable content references in reports.
std::uint64_t fnv1a64(std::string_view bytes);

} // namespace orbitframes
