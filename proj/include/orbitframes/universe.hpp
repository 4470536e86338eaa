#pragma once

#include "orbitframes/types.hpp"

#include <utility>

namespace orbitframes {

enum class Mode { unilateral, bilateral };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// Finite truncation of the ambient function space.
///
/// unilateral: functions on the cyclic grid {lambda_t = exp(2*pi*i*t/N_lambda)}
/// with values in the degree-truncated Hardy space (z-degrees 0..M_z-1) over
/// n_gen generator slots. Total dimension N_lambda * M_z * n_gen.
///
/// bilateral: functions on the N_lambda x N2 product grid with values in
/// C^n_gen. Total dimension N_lambda * N2 * n_gen.
///
/// Grid averages (1/grid_count) model the normalized measure, so the constant
/// field with unit fiber value has norm exactly 1.
struct Universe {
    Mode mode = Mode::unilateral;
    int n_lambda = 1; // size of the cyclic lambda-grid
    int m_z = 1;      // z-degree cutoff (unilateral only)
    int n2 = 1;       // second grid size (bilateral only)
    int n_gen = 1;    // number of generator slots

    int dim() const {
        return mode == Mode::unilateral ? n_lambda * m_z * n_gen : n_lambda * n2 * n_gen;
    }
    /// Number of grid points: N_lambda, or N_lambda*N2 in bilateral mode.
    int grid_count() const {
        return mode == Mode::unilateral ? n_lambda : n_lambda * n2;
    }
    /// Dimension of one fiber: M_z*n_gen, or n_gen in bilateral mode.
    int fiber_dim() const {
        return mode == Mode::unilateral ? m_z * n_gen : n_gen;
    }

    /// First grid coordinate, lambda_t = exp(2*pi*i*t/N_lambda).
    cxd lambda(long long t) const;
    /// Second grid coordinate (bilateral), mu_s = exp(2*pi*i*s/N2).
    cxd mu(long long s) const;

    /// Flat storage index. Unilateral: (t, z-degree j, generator i);
    /// bilateral: (t1, t2, i). Grid-major in both cases.
    int flat(int t, int j, int i) const {
        return (t * (mode == Mode::unilateral ? m_z : n2) + j) * n_gen + i;
    }

    bool operator==(const Universe& o) const;
    bool operator!=(const Universe& o) const { return !(*this == o); }
};

/// Validated constructor. mz_or_n2 is M_z in unilateral mode and N2 in
/// bilateral mode; the unused field is set to 1.
Universe make_universe(Mode mode, int n_lambda, int mz_or_n2, int n_gen);

/// Index of a canonical basis element U^k S^j phi_i (unilateral) or
/// U1^k U2^j phi_i (bilateral). In cyclic universes k is taken modulo
/// N_lambda and, bilaterally, j modulo N2; truncated-window orbit systems
/// reuse the struct with signed k (and j).
struct BasisIndex {
    int k = 0;
    int j = 0;
    int i = 0;

    bool operator==(const BasisIndex& o) const { return k == o.k && j == o.j && i == o.i; }
};

/// One element of the truncated function space. `values` holds the grid
/// samples (z-coefficients per grid point in unilateral mode), flattened via
/// Universe::flat. The field inner product carries the 1/grid_count weight;
/// `vec()` rescales so that the standard inner product of vec-coordinates
/// equals the field inner product. All subspace bases and synthesis matrices
/// in this toolkit live in vec-coordinates.
struct CoefField {
    Universe universe;
    VectorXcd values;

    CoefField() = default;
    CoefField(const Universe& u, VectorXcd v) : universe(u), values(std::move(v)) {}

    static CoefField zero(const Universe& u) {
        return CoefField(u, VectorXcd::Zero(u.dim()));
    }

    /// Grid-scaled coordinates: values / sqrt(grid_count).
    VectorXcd vec() const;
    static CoefField from_vec(const Universe& u, const VectorXcd& v);

    /// Fourier coefficients c[k,j,i] = <f, basis(k,j,i)>, flattened with the
    /// same (k,j,i) ordering as flat(). Explicit DFT along the grid axes.
    VectorXcd coeffs() const;
    static CoefField from_coeffs(const Universe& u, const VectorXcd& c);
};

/// Discretized U^k S^j phi_i. Entry at (t, j', i') is lambda_t^k * delta_{jj'}
/// * delta_{ii'}; bilaterally lambda_{t1}^k * mu_{t2}^j * delta_{ii'}. These
/// form an orthonormal basis of the universe.
CoefField basis_element(const Universe& u, const BasisIndex& idx);

/// <f,g> = (1/grid_count) * sum_t <f(grid_t), g(grid_t)>, conjugate-linear in g.
cxd inner(const CoefField& f, const CoefField& g);
double norm(const CoefField& f);

/// Bilateral shift (Uf)(lambda) = lambda f(lambda) and its adjoint. Exactly
/// unitary on the cyclic grid.
CoefField apply_U(const CoefField& f);
CoefField apply_U_star(const CoefField& f);

/// Pointwise unilateral shift: z-degrees move j -> j+1; the top coefficient
/// (j = M_z-1) is dropped and its norm contribution reported. Returns
/// (shifted field, overflow norm); overflow 0 means the action was exact.
std::pair<CoefField, double> apply_S_hat(const CoefField& f);
/// Exact adjoint of the truncated S-hat: j -> j-1, dropping j = 0.
CoefField apply_S_hat_star(const CoefField& f);

/// Bilateral coordinate shifts (U_i f)(z1,z2) = z_i f(z1,z2). Exactly unitary
/// and commuting.
CoefField apply_U1(const CoefField& f);
CoefField apply_U2(const CoefField& f);
CoefField apply_U1_star(const CoefField& f);
CoefField apply_U2_star(const CoefField& f);

// Vec-coordinate versions of the shift operators (same formulas; the grid
// scaling commutes with all of them). These are the building blocks for the
// matrix-free compressions in the model and fibers modules.
VectorXcd shift_u_vec(const Universe& u, const VectorXcd& v, bool adjoint = false);
VectorXcd shift_s_vec(const Universe& u, const VectorXcd& v, bool adjoint = false, double* overflow = nullptr);
VectorXcd shift_u2_vec(const Universe& u, const VectorXcd& v, bool adjoint = false);

/// Applies the forward j-direction operator of the universe (S-hat in
/// unilateral mode, U2 in bilateral mode) to each column.
MatrixXcd shift_u_cols(const Universe& u, const MatrixXcd& m, bool adjoint = false);
MatrixXcd shift_s_cols(const Universe& u, const MatrixXcd& m, bool adjoint = false);

/// Unitary change of coordinates c = Phi * s from vec-coordinates to Fourier
/// coordinates. Dense dim x dim; intended for desk-scale universes.
MatrixXcd fourier_map(const Universe& u);

} // namespace orbitframes
