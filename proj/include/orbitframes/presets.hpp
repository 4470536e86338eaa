#pragma once

#include "orbitframes/tuples.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace orbitframes {

/// A ready-made tuple together with the ambient universe it models and, for
/// the synthetic fixtures, the model subspace it was carved from (used as
/// ground truth in round-trip tests; empty otherwise).
struct Preset {
    std::string name;
    Tuple tuple;
    Universe universe;
    MatrixXcd n0_basis; // vec-coordinate orthonormal columns; may have 0 cols
};

/// The whole universe as a tuple: (L^2-model, U, S-hat, {phi_i}). Its orbit
/// is the canonical orthonormal basis, so it is a Riesz (indeed Parseval)
/// tuple with trivial synthesis kernel.
Preset preset_full_riesz(int n_lambda, int m_z, int n_gen);

/// Synthetic basic tuple with fiber dimensions m_profile[t] (0..M_z) shared
/// by all generator slots: the model subspace keeps z-degrees below
/// m_profile[t] at grid point t. Down-shift-closed per fiber, so it is a
/// valid model subspace with exact ground truth.
Preset preset_monomial_fibers(int n_lambda, int m_z, int n_gen, const std::vector<int>& m_profile);

/// Bilateral synthetic basic tuple supported on the mask E (t1-major,
/// size N1*N2, single generator): multiplication by the two grid coordinates
/// restricted to E, generator = projected constant field.
Preset preset_bilateral_mask(int n1, int n2, const std::vector<std::uint8_t>& mask);

/// Two-dimensional diagonal example with geometric orbit decay:
/// T = I (N = 1), L = diag(1/2, 1/3), w = (1,1), j truncated at J.
Preset preset_geometric_diag(int j_cutoff = 50);

/// A frame-tuple base with two independent generators and its two
/// (n+1)-generator extensions by v0 + v1 and v0 - v1.
struct Remark49Pair {
    Preset base;
    Tuple plus;
    Tuple minus;
};

Remark49Pair preset_remark49_pair(int n_lambda, int m_z, int n_gen);

/// Randomized monomial-fiber profile (each m(t) uniform on [0, M_z], forced
/// nonzero somewhere), for property tests and the acceptance suite.
std::vector<int> random_m_profile(int n_lambda, int m_z, std::uint64_t seed);

} // namespace orbitframes
