#include "orbitframes/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace orbitframes {

namespace {

using SVD = Eigen::BDCSVD<MatrixXcd>;

RankInfo rank_info_abs(const VectorXd& sigma, double cutoff) {
    RankInfo info;
    info.sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma[i] > cutoff) {
            info.rank = static_cast<int>(i) + 1;
            info.smallest_kept = sigma[i];
        } else {
            info.largest_dropped = sigma[i];
            break;
        }
    }
    return info;
}

RankInfo rank_info_from(const VectorXd& sigma, double rel_tol) {
    return rank_info_abs(sigma, rel_tol * (sigma.size() > 0 ? sigma[0] : 0.0));
}

} // namespace

double RankInfo::gap() const {
    if (largest_dropped <= 0.0) return std::numeric_limits<double>::infinity();
    return smallest_kept / largest_dropped;
}

MatrixXcd range_basis(const MatrixXcd& a, double rel_tol, RankInfo* info) {
    if (a.cols() == 0 || a.rows() == 0) {
        if (info) *info = RankInfo{};
        return MatrixXcd(a.rows(), 0);
    }
    SVD svd(a, Eigen::ComputeThinU);
    RankInfo ri = rank_info_from(svd.singularValues(), rel_tol);
    if (info) *info = ri;
    return svd.matrixU().leftCols(ri.rank);
}

MatrixXcd range_basis_with_cutoff(const MatrixXcd& a, double abs_cutoff, RankInfo* info) {
    if (a.cols() == 0 || a.rows() == 0) {
        if (info) *info = RankInfo{};
        return MatrixXcd(a.rows(), 0);
    }
    SVD svd(a, Eigen::ComputeThinU);
    RankInfo ri = rank_info_abs(svd.singularValues(), abs_cutoff);
    if (info) *info = ri;
    return svd.matrixU().leftCols(ri.rank);
}

MatrixXcd null_space(const MatrixXcd& a, double rel_tol, RankInfo* info) {
    if (a.cols() == 0) {
        if (info) *info = RankInfo{};
        return MatrixXcd(0, 0);
    }
    SVD svd(a, Eigen::ComputeFullV);
    RankInfo ri = rank_info_from(svd.singularValues(), rel_tol);
    if (info) *info = ri;
    return svd.matrixV().rightCols(a.cols() - ri.rank);
}

MatrixXcd null_space_with_cutoff(const MatrixXcd& a, double abs_cutoff, RankInfo* info) {
    if (a.cols() == 0) {
        if (info) *info = RankInfo{};
        return MatrixXcd(0, 0);
    }
    if (a.rows() == 0) {
        if (info) *info = RankInfo{};
        return MatrixXcd::Identity(a.cols(), a.cols());
    }
    SVD svd(a, Eigen::ComputeFullV);
    RankInfo ri = rank_info_abs(svd.singularValues(), abs_cutoff);
    if (info) *info = ri;
    return svd.matrixV().rightCols(a.cols() - ri.rank);
}

MatrixXcd corange_basis(const MatrixXcd& a, double rel_tol, RankInfo* info) {
    if (a.cols() == 0) {
        if (info) *info = RankInfo{};
        return MatrixXcd(0, 0);
    }
    SVD svd(a, Eigen::ComputeFullV);
    RankInfo ri = rank_info_from(svd.singularValues(), rel_tol);
    if (info) *info = ri;
    return svd.matrixV().leftCols(ri.rank);
}

double operator_norm(const MatrixXcd& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return SVD(a).singularValues()[0];
}

double subspace_distance(const MatrixXcd& b1, const MatrixXcd& b2) {
    if (b1.cols() == 0 && b2.cols() == 0) return 0.0;
    if (b1.cols() == 0 || b2.cols() == 0) return 1.0;
    // Restrict P1 - P2 to span([B1 B2]); outside it the difference vanishes.
    MatrixXcd joint(b1.rows(), b1.cols() + b2.cols());
    joint << b1, b2;
    MatrixXcd q = range_basis(joint, 1e-13);
    MatrixXcd x1 = q.adjoint() * b1;
    MatrixXcd x2 = q.adjoint() * b2;
    MatrixXcd m = x1 * x1.adjoint() - x2 * x2.adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

VectorXd singular_values(const MatrixXcd& a) {
    if (a.rows() == 0 || a.cols() == 0) return VectorXd();
    return SVD(a).singularValues();
}

MatrixXcd random_complex_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    MatrixXcd m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            m(r, c) = cxd(g(rng), g(rng));
    return m;
}

VectorXcd random_complex_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    VectorXcd v(n);
    for (int r = 0; r < n; ++r) v[r] = cxd(g(rng), g(rng));
    return v;
}

MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
    MatrixXcd m = random_complex_matrix(n, n, rng);
    Eigen::HouseholderQR<MatrixXcd> qr(m);
    MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n, n);
    // fix the phase ambiguity so the draw is rotation-invariant
    MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        cxd d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

MatrixXcd random_conditioned(int n, double cond, std::mt19937_64& rng) {
    if (cond < 1.0) throw DomainError("condition number", "must be >= 1");
    MatrixXcd u = random_unitary(n, rng);
    MatrixXcd v = random_unitary(n, rng);
    VectorXd s(n);
    const double hi = std::sqrt(cond), lo = 1.0 / hi;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n; ++i) s[i] = lo * std::pow(hi / lo, unif(rng));
    if (n >= 1) s[0] = hi;
    if (n >= 2) s[n - 1] = lo;
    return u * s.asDiagonal() * v.adjoint();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace orbitframes
