#include "orbitframes/universe.hpp"

#include <cmath>
#include <numbers>

namespace orbitframes {

namespace {

constexpr long long kMaxDim = 1ll << 22; // dense desk-scale limit

cxd root_of_unity(long long num, long long den) {
    // exp(2*pi*i*num/den) with the exponent reduced first, so powers of grid
    // points stay exactly unimodular.
    long long r = num % den;
    if (r < 0) r += den;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den));
}

void check_same_universe(const CoefField& f, const CoefField& g, const char* op) {
    if (f.universe != g.universe)
        throw DomainError("universe mismatch", std::string(op) + " requires both fields on the same universe");
}

void check_mode(const CoefField& f, Mode m, const char* op) {
    if (f.universe.mode != m)
        throw DomainError("universe mismatch",
                          std::string(op) + " requires a " +
                              (m == Mode::unilateral ? "unilateral" : "bilateral") + " universe");
}

} // namespace

const char* to_string(Mode m) {
    return m == Mode::unilateral ? "unilateral" : "bilateral";
}

Mode mode_from_string(const std::string& s) {
    if (s == "unilateral") return Mode::unilateral;
    if (s == "bilateral") return Mode::bilateral;
    throw std::runtime_error("unknown mode '" + s + "' (expected unilateral or bilateral)");
}

cxd Universe::lambda(long long t) const { return root_of_unity(t, n_lambda); }
cxd Universe::mu(long long s) const { return root_of_unity(s, n2); }

bool Universe::operator==(const Universe& o) const {
    if (mode != o.mode || n_lambda != o.n_lambda || n_gen != o.n_gen) return false;
    return mode == Mode::unilateral ? m_z == o.m_z : n2 == o.n2;
}

Universe make_universe(Mode mode, int n_lambda, int mz_or_n2, int n_gen) {
    if (n_lambda < 1 || mz_or_n2 < 1 || n_gen < 1)
        throw DomainError("universe size", "all sizes must be >= 1, got (" + std::to_string(n_lambda) +
                                               ", " + std::to_string(mz_or_n2) + ", " + std::to_string(n_gen) + ")");
    long long d = 1ll * n_lambda * mz_or_n2 * n_gen;
    if (d > kMaxDim)
        throw DomainError("universe size", "total dimension " + std::to_string(d) +
                                               " exceeds the dense limit " + std::to_string(kMaxDim));
    Universe u;
    u.mode = mode;
    u.n_lambda = n_lambda;
    u.n_gen = n_gen;
    if (mode == Mode::unilateral) {
        u.m_z = mz_or_n2;
        u.n2 = 1;
    } else {
        u.n2 = mz_or_n2;
        u.m_z = 1;
    }
    return u;
}

VectorXcd CoefField::vec() const {
    return values / std::sqrt(static_cast<double>(universe.grid_count()));
}

CoefField CoefField::from_vec(const Universe& u, const VectorXcd& v) {
    if (v.size() != u.dim())
        throw DomainError("dimension mismatch", "vector of size " + std::to_string(v.size()) +
                                                    " for universe of dim " + std::to_string(u.dim()));
    return CoefField(u, v * std::sqrt(static_cast<double>(u.grid_count())));
}

VectorXcd CoefField::coeffs() const {
    const Universe& u = universe;
    VectorXcd c = VectorXcd::Zero(u.dim());
    if (u.mode == Mode::unilateral) {
        // c[k,j,i] = (1/N) sum_t lambda_t^{-k} f[t,j,i]
        for (int k = 0; k < u.n_lambda; ++k)
            for (int t = 0; t < u.n_lambda; ++t) {
                cxd w = std::conj(u.lambda(1ll * t * k)) / static_cast<double>(u.n_lambda);
                for (int j = 0; j < u.m_z; ++j)
                    for (int i = 0; i < u.n_gen; ++i)
                        c[u.flat(k, j, i)] += w * values[u.flat(t, j, i)];
            }
    } else {
        // separable DFT: first along t1, then along t2
        MatrixXcd half = MatrixXcd::Zero(u.n_lambda, u.n2 * u.n_gen);
        for (int k = 0; k < u.n_lambda; ++k)
            for (int t1 = 0; t1 < u.n_lambda; ++t1) {
                cxd w = std::conj(u.lambda(1ll * t1 * k)) / static_cast<double>(u.n_lambda);
                for (int rest = 0; rest < u.n2 * u.n_gen; ++rest)
                    half(k, rest) += w * values[t1 * u.n2 * u.n_gen + rest];
            }
        for (int k = 0; k < u.n_lambda; ++k)
            for (int j = 0; j < u.n2; ++j)
                for (int t2 = 0; t2 < u.n2; ++t2) {
                    cxd w = std::conj(u.mu(1ll * t2 * j)) / static_cast<double>(u.n2);
                    for (int i = 0; i < u.n_gen; ++i)
                        c[u.flat(k, j, i)] += w * half(k, t2 * u.n_gen + i);
                }
    }
    return c;
}

CoefField CoefField::from_coeffs(const Universe& u, const VectorXcd& c) {
    if (c.size() != u.dim())
        throw DomainError("dimension mismatch", "coefficient vector size does not match universe");
    CoefField f = CoefField::zero(u);
    if (u.mode == Mode::unilateral) {
        for (int t = 0; t < u.n_lambda; ++t)
            for (int k = 0; k < u.n_lambda; ++k) {
                cxd w = u.lambda(1ll * t * k);
                for (int j = 0; j < u.m_z; ++j)
                    for (int i = 0; i < u.n_gen; ++i)
                        f.values[u.flat(t, j, i)] += w * c[u.flat(k, j, i)];
            }
    } else {
        MatrixXcd half = MatrixXcd::Zero(u.n_lambda, u.n2 * u.n_gen);
        for (int t2 = 0; t2 < u.n2; ++t2)
            for (int j = 0; j < u.n2; ++j) {
                cxd w = u.mu(1ll * t2 * j);
                for (int k = 0; k < u.n_lambda; ++k)
                    for (int i = 0; i < u.n_gen; ++i)
                        half(k, t2 * u.n_gen + i) += w * c[u.flat(k, j, i)];
            }
        for (int t1 = 0; t1 < u.n_lambda; ++t1)
            for (int k = 0; k < u.n_lambda; ++k) {
                cxd w = u.lambda(1ll * t1 * k);
                for (int rest = 0; rest < u.n2 * u.n_gen; ++rest)
                    f.values[t1 * u.n2 * u.n_gen + rest] += w * half(k, rest);
            }
    }
    return f;
}

CoefField basis_element(const Universe& u, const BasisIndex& idx) {
    if (idx.i < 0 || idx.i >= u.n_gen)
        throw DomainError("index out of range", "generator index " + std::to_string(idx.i));
    CoefField f = CoefField::zero(u);
    if (u.mode == Mode::unilateral) {
        if (idx.j < 0 || idx.j >= u.m_z)
            throw DomainError("index out of range", "z-degree " + std::to_string(idx.j));
        for (int t = 0; t < u.n_lambda; ++t)
            f.values[u.flat(t, idx.j, idx.i)] = u.lambda(1ll * t * idx.k);
    } else {
        for (int t1 = 0; t1 < u.n_lambda; ++t1) {
            cxd a = u.lambda(1ll * t1 * idx.k);
            for (int t2 = 0; t2 < u.n2; ++t2)
                f.values[u.flat(t1, t2, idx.i)] = a * u.mu(1ll * t2 * idx.j);
        }
    }
    return f;
}

cxd inner(const CoefField& f, const CoefField& g) {
    check_same_universe(f, g, "inner");
    // conjugate-linear in g
    return g.values.dot(f.values) / static_cast<double>(f.universe.grid_count());
}

double norm(const CoefField& f) {
    return f.values.norm() / std::sqrt(static_cast<double>(f.universe.grid_count()));
}

VectorXcd shift_u_vec(const Universe& u, const VectorXcd& v, bool adjoint) {
    VectorXcd out(v.size());
    const int block = u.fiber_dim();
    for (int t1 = 0; t1 < u.n_lambda; ++t1) {
        cxd w = u.lambda(t1);
        if (adjoint) w = std::conj(w);
        const int base = t1 * (u.mode == Mode::unilateral ? block : u.n2 * u.n_gen);
        const int len = (u.mode == Mode::unilateral) ? block : u.n2 * u.n_gen;
        out.segment(base, len) = w * v.segment(base, len);
    }
    return out;
}

VectorXcd shift_s_vec(const Universe& u, const VectorXcd& v, bool adjoint, double* overflow) {
    VectorXcd out = VectorXcd::Zero(v.size());
    if (u.mode == Mode::unilateral) {
        double drop2 = 0.0;
        for (int t = 0; t < u.n_lambda; ++t)
            for (int i = 0; i < u.n_gen; ++i) {
                if (!adjoint) {
                    for (int j = u.m_z - 1; j >= 1; --j)
                        out[u.flat(t, j, i)] = v[u.flat(t, j - 1, i)];
                    drop2 += std::norm(v[u.flat(t, u.m_z - 1, i)]);
                } else {
                    for (int j = 0; j + 1 < u.m_z; ++j)
                        out[u.flat(t, j, i)] = v[u.flat(t, j + 1, i)];
                }
            }
        if (overflow) *overflow = adjoint ? 0.0 : std::sqrt(drop2);
    } else {
        // bilateral j-direction is the (unitary) second-coordinate shift
        out = shift_u2_vec(u, v, adjoint);
        if (overflow) *overflow = 0.0;
    }
    return out;
}

VectorXcd shift_u2_vec(const Universe& u, const VectorXcd& v, bool adjoint) {
    if (u.mode != Mode::bilateral)
        throw DomainError("universe mismatch", "U2 requires a bilateral universe");
    VectorXcd out(v.size());
    for (int t1 = 0; t1 < u.n_lambda; ++t1)
        for (int t2 = 0; t2 < u.n2; ++t2) {
            cxd w = u.mu(t2);
            if (adjoint) w = std::conj(w);
            for (int i = 0; i < u.n_gen; ++i)
                out[u.flat(t1, t2, i)] = w * v[u.flat(t1, t2, i)];
        }
    return out;
}

MatrixXcd shift_u_cols(const Universe& u, const MatrixXcd& m, bool adjoint) {
    MatrixXcd out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        out.col(c) = shift_u_vec(u, m.col(c), adjoint);
    return out;
}

MatrixXcd shift_s_cols(const Universe& u, const MatrixXcd& m, bool adjoint) {
    MatrixXcd out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        out.col(c) = shift_s_vec(u, m.col(c), adjoint);
    return out;
}

CoefField apply_U(const CoefField& f) {
    return CoefField(f.universe, shift_u_vec(f.universe, f.values, false));
}

CoefField apply_U_star(const CoefField& f) {
    return CoefField(f.universe, shift_u_vec(f.universe, f.values, true));
}

std::pair<CoefField, double> apply_S_hat(const CoefField& f) {
    check_mode(f, Mode::unilateral, "apply_S_hat");
    double overflow_raw = 0.0;
    VectorXcd out = shift_s_vec(f.universe, f.values, false, &overflow_raw);
    // overflow is reported in field norm units
    double overflow = overflow_raw / std::sqrt(static_cast<double>(f.universe.grid_count()));
    return {CoefField(f.universe, std::move(out)), overflow};
}

CoefField apply_S_hat_star(const CoefField& f) {
    check_mode(f, Mode::unilateral, "apply_S_hat_star");
    return CoefField(f.universe, shift_s_vec(f.universe, f.values, true));
}

CoefField apply_U1(const CoefField& f) {
    check_mode(f, Mode::bilateral, "apply_U1");
    return CoefField(f.universe, shift_u_vec(f.universe, f.values, false));
}

CoefField apply_U1_star(const CoefField& f) {
    check_mode(f, Mode::bilateral, "apply_U1_star");
    return CoefField(f.universe, shift_u_vec(f.universe, f.values, true));
}

CoefField apply_U2(const CoefField& f) {
    return CoefField(f.universe, shift_u2_vec(f.universe, f.values, false));
}

CoefField apply_U2_star(const CoefField& f) {
    return CoefField(f.universe, shift_u2_vec(f.universe, f.values, true));
}

MatrixXcd fourier_map(const Universe& u) {
    const int d = u.dim();
    MatrixXcd phi(d, d);
    for (int i = 0; i < u.n_gen; ++i) {
        if (u.mode == Mode::unilateral) {
            const double s = 1.0 / std::sqrt(static_cast<double>(u.n_lambda));
            for (int k = 0; k < u.n_lambda; ++k)
                for (int j = 0; j < u.m_z; ++j) {
                    const int row = u.flat(k, j, i);
                    for (int t = 0; t < u.n_lambda; ++t)
                        for (int jj = 0; jj < u.m_z; ++jj)
                            for (int ii = 0; ii < u.n_gen; ++ii)
                                phi(row, u.flat(t, jj, ii)) =
                                    (jj == j && ii == i) ? std::conj(u.lambda(1ll * t * k)) * s : cxd(0.0);
                }
        } else {
            const double s = 1.0 / std::sqrt(static_cast<double>(u.n_lambda * u.n2));
            for (int k = 0; k < u.n_lambda; ++k)
                for (int j = 0; j < u.n2; ++j) {
                    const int row = u.flat(k, j, i);
                    for (int t1 = 0; t1 < u.n_lambda; ++t1)
                        for (int t2 = 0; t2 < u.n2; ++t2)
                            for (int ii = 0; ii < u.n_gen; ++ii)
                                phi(row, u.flat(t1, t2, ii)) =
                                    (ii == i) ? std::conj(u.lambda(1ll * t1 * k) * u.mu(1ll * t2 * j)) * s
                                              : cxd(0.0);
                }
        }
    }
    return phi;
}

} // namespace orbitframes
