#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbitframes/genlab.hpp"
#include "orbitframes/linalg.hpp"
#include "orbitframes/presets.hpp"

#include <Eigen/LU>

#include <cmath>
#include <random>

using namespace orbitframes;

namespace {

/// Brute-force commutant dimension: rank-nullity on the stacked commutator
/// system, rank via full-pivot LU (a different decomposition than the SVD
/// route used by commutant_basis).
int commutant_dim_oracle(const MatrixXcd& t_op, const MatrixXcd& l_op) {
    const int d = static_cast<int>(t_op.rows());
    MatrixXcd k(2 * d * d, d * d);
    k.setZero();
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r)
            for (int m = 0; m < d; ++m) {
                k(c * d + r, m * d + r) += t_op(m, c);
                k(c * d + r, c * d + m) -= t_op(r, m);
                k(d * d + c * d + r, m * d + r) += l_op(m, c);
                k(d * d + c * d + r, c * d + m) -= l_op(r, m);
            }
    Eigen::FullPivLU<MatrixXcd> lu(k);
    lu.setThreshold(1e-10);
    return d * d - static_cast<int>(lu.rank());
}

} // namespace

TEST_CASE("commutant of distinct-eigenvalue diagonals is diagonal") {
    MatrixXcd t = MatrixXcd::Zero(2, 2);
    t(0, 0) = 1.0;
    t(1, 1) = 2.0;
    MatrixXcd l = MatrixXcd::Identity(2, 2);
    CommutantBasis cb = commutant_basis(t, l);
    CHECK(cb.dimension == 2);
    CHECK(cb.max_commutator_residual < 1e-12);
    CHECK(cb.identity_residual < 1e-10);
    for (const auto& b : cb.basis) {
        CHECK(std::abs(b(0, 1)) < 1e-12);
        CHECK(std::abs(b(1, 0)) < 1e-12);
    }
}

TEST_CASE("commutant of the identity pair is everything") {
    MatrixXcd id = MatrixXcd::Identity(2, 2);
    CommutantBasis cb = commutant_basis(id, id);
    CHECK(cb.dimension == 4);
}

TEST_CASE("commutant of the 2x2 cyclic shift is the circulants") {
    MatrixXcd t = MatrixXcd::Zero(2, 2);
    t(0, 1) = 1.0;
    t(1, 0) = 1.0;
    MatrixXcd l = MatrixXcd::Identity(2, 2);
    CommutantBasis cb = commutant_basis(t, l);
    CHECK(cb.dimension == 2);
    CHECK(cb.dimension == commutant_dim_oracle(t, l));
    // circulants: equal diagonal, equal anti-diagonal
    for (const auto& b : cb.basis) {
        CHECK(std::abs(b(0, 0) - b(1, 1)) < 1e-12);
        CHECK(std::abs(b(0, 1) - b(1, 0)) < 1e-12);
    }
}

TEST_CASE("commutant dimension matches the brute-force oracle up to dim 6") {
    std::mt19937_64 rng(41);
    for (int d : {3, 4, 5, 6}) {
        // T with distinct eigenvalues, L a polynomial in T: the commutant is
        // the full diagonal algebra in T's eigenbasis, dimension d
        MatrixXcd s = random_conditioned(d, 10.0, rng);
        VectorXcd eig(d);
        for (int i = 0; i < d; ++i) eig[i] = cxd(1.0 + i, 0.3 * i);
        MatrixXcd t = s * eig.asDiagonal() * s.partialPivLu().inverse();
        MatrixXcd l = t * t + 2.0 * t;
        CommutantBasis cb = commutant_basis(t, l);
        CHECK(cb.dimension == d);
        CHECK(cb.dimension == commutant_dim_oracle(t, l));
        CHECK(cb.max_commutator_residual < 1e-8);
    }
}

TEST_CASE("sampling the commutant: determinism and invertibility") {
    MatrixXcd t = MatrixXcd::Zero(3, 3);
    t(0, 0) = 1.0;
    t(1, 1) = 2.0;
    t(2, 2) = 3.0;
    CommutantBasis cb = commutant_basis(t, MatrixXcd::Identity(3, 3));
    REQUIRE(cb.dimension == 3);

    MatrixXcd b1 = sample_invertible_commutant(cb, 77);
    MatrixXcd b2 = sample_invertible_commutant(cb, 77);
    CHECK((b1 - b2).norm() == 0.0); // identical draw for the same seed

    VectorXd s = singular_values(b1);
    CHECK(s[s.size() - 1] > 1e-6 * s[0]);
    CHECK(std::abs(b1(0, 1)) < 1e-12); // stays inside the commutant

    // a one-dimensional commutant span{I}: samples are scalar multiples
    CommutantBasis scalars;
    scalars.dim_h = 2;
    scalars.dimension = 1;
    scalars.basis = {MatrixXcd::Identity(2, 2) / std::sqrt(2.0)};
    MatrixXcd b3 = sample_invertible_commutant(scalars, 5);
    CHECK(std::abs(b3(0, 0) - b3(1, 1)) < 1e-14);
    CHECK(std::abs(b3(0, 0)) > 0.0);

    // a basis of singular elements exhausts the tries
    CommutantBasis degenerate;
    degenerate.dim_h = 2;
    degenerate.dimension = 1;
    MatrixXcd p = MatrixXcd::Zero(2, 2);
    p(0, 0) = 1.0;
    degenerate.basis = {p};
    CHECK_THROWS_AS(sample_invertible_commutant(degenerate, 1, 8), DomainError);
}

TEST_CASE("membership_V: the base generator is in V with the identity map") {
    Preset p = preset_monomial_fibers(4, 3, 1, {2, 1, 3, 0});
    MembershipVerdict v = membership_V(p.tuple, p.tuple.generators[0], p.universe);
    CHECK(v.in_v);
    CHECK(v.similar);
    CHECK(v.consistent);
    CHECK(v.kernel_distance < 1e-12);
    REQUIRE(v.sim.has_connecting_map);
    CHECK((v.sim.connecting_map - MatrixXcd::Identity(p.tuple.dim_h, p.tuple.dim_h)).norm() < 1e-10);
}

TEST_CASE("membership_V: commutant pushes of the generator stay in V") {
    Preset p = preset_monomial_fibers(4, 3, 1, {2, 1, 3, 0});
    CommutantBasis cb = commutant_basis(p.tuple.T, p.tuple.L);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        MatrixXcd b = sample_invertible_commutant(cb, seed);
        MembershipVerdict v = membership_V(p.tuple, b * p.tuple.generators[0], p.universe);
        CHECK(v.in_v);
        CHECK(v.similar);
        CHECK(v.consistent);
        REQUIRE(v.sim.has_connecting_map);
        CHECK((v.sim.connecting_map - b).norm() / b.norm() < 1e-7);
    }
}

TEST_CASE("membership_V: zero vector is not in V, verdicts agree") {
    Preset p = preset_monomial_fibers(4, 2, 1, {1, 2, 1, 1});
    MembershipVerdict v = membership_V(p.tuple, VectorXcd::Zero(p.tuple.dim_h), p.universe);
    CHECK_FALSE(v.in_v);
    CHECK_FALSE(v.similar);
    CHECK(v.consistent);
}

TEST_CASE("membership_V: frame and kernel verdicts agree for arbitrary candidates") {
    Preset p = preset_monomial_fibers(4, 2, 1, {2, 1, 0, 2});
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        VectorXcd v = random_complex_vector(p.tuple.dim_h, rng);
        MembershipVerdict mv = membership_V(p.tuple, v, p.universe);
        CHECK(mv.consistent);
    }

    // candidates with a vanishing spectral component cannot generate the
    // whole space; both pathways must reject them
    for (int trial = 0; trial < 5; ++trial) {
        VectorXcd v = random_complex_vector(p.tuple.dim_h, rng);
        v.head(2).setZero(); // kill the fiber at the first grid point
        MembershipVerdict mv = membership_V(p.tuple, v, p.universe);
        CHECK_FALSE(mv.in_v);
        CHECK_FALSE(mv.similar);
        CHECK(mv.consistent);
    }
}

TEST_CASE("membership_V requires a single-generator frame base") {
    Preset p2 = preset_monomial_fibers(3, 2, 2, {1, 1, 1});
    CHECK_THROWS_AS(membership_V(p2.tuple, p2.tuple.generators[0], p2.universe), DomainError);

    Preset p = preset_monomial_fibers(3, 2, 1, {1, 1, 1});
    Tuple dead = p.tuple;
    dead.generators[0].setZero();
    CHECK_THROWS_AS(membership_V(dead, p.tuple.generators[0], p.universe), DomainError);
}

TEST_CASE("multi-generator counterexample: both extensions are frames, never similar") {
    Remark49Pair pair = preset_remark49_pair(4, 3, 2);
    MultigenCounterexample ce = counterexample_multigen(pair.base.tuple);

    REQUIRE(ce.report.frame_reports.size() == 2);
    CHECK(ce.report.frame_reports[0].is_frame);
    CHECK(ce.report.frame_reports[1].is_frame);
    CHECK(ce.report.frame_reports[0].lower > 1e-6);
    CHECK(ce.report.frame_reports[1].lower > 1e-6);
    CHECK(ce.report.class_count == 2);
    CHECK(ce.report.kernel_distance(0, 1) > 0.1);

    // verdict is stable across the whole sim_tol range
    Universe u = universe_for(ce.plus);
    for (double st : {1e-9, 1e-7, 1e-5}) {
        Tolerances tol;
        tol.sim_tol = st;
        GeneratorClassReport rep = class_census({ce.plus, ce.minus}, u, tol);
        CHECK(rep.class_count == 2);
    }
}

TEST_CASE("counterexample precondition: dependent generators are rejected") {
    Preset p = preset_monomial_fibers(4, 3, 2, {2, 1, 3, 0});
    Tuple bad = p.tuple;
    bad.generators[1] = 2.0 * bad.generators[0];
    CHECK_THROWS_WITH_AS(counterexample_multigen(bad), doctest::Contains("independent"), DomainError);
}

TEST_CASE("class census: commutant family collapses to one class") {
    Preset p = preset_monomial_fibers(4, 2, 1, {2, 1, 0, 2});
    CommutantBasis cb = commutant_basis(p.tuple.T, p.tuple.L);
    std::vector<Tuple> family;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Tuple t = p.tuple;
        t.generators[0] = sample_invertible_commutant(cb, seed) * p.tuple.generators[0];
        family.push_back(std::move(t));
    }
    GeneratorClassReport rep = class_census(family, p.universe);
    CHECK(rep.class_count == 1);
    for (int c : rep.component) CHECK(c == 0);
}

TEST_CASE("class census: {v, a v} families split into one class per scalar") {
    Preset p = preset_monomial_fibers(3, 2, 1, {2, 1, 2});
    Universe u2 = make_universe(Mode::unilateral, 3, 2, 2);
    std::vector<Tuple> family;
    for (double a : {1.0, 2.0, 3.0}) {
        Tuple t = p.tuple;
        t.generators = {p.tuple.generators[0], a * p.tuple.generators[0]};
        family.push_back(std::move(t));
    }
    GeneratorClassReport rep = class_census(family, u2);
    CHECK(rep.class_count == 3);
    CHECK(rep.kernel_distance(0, 1) > 1e-3);
    CHECK(rep.kernel_distance(1, 2) > 1e-3);
}

TEST_CASE("class census: degenerate and error cases") {
    Preset p = preset_monomial_fibers(3, 2, 1, {1, 1, 2});
    GeneratorClassReport rep = class_census({p.tuple}, p.universe);
    CHECK(rep.class_count == 1);

    Preset other = preset_monomial_fibers(3, 2, 1, {2, 1, 1});
    CHECK_THROWS_WITH_AS(class_census({p.tuple, other.tuple}, p.universe),
                         doctest::Contains("mixed operators"), DomainError);
}

TEST_CASE("generator hashes are stable and content-sensitive") {
    Preset p = preset_monomial_fibers(3, 2, 1, {1, 1, 2});
    Tuple other = p.tuple;
    other.generators[0][0] += 1.0;
    CHECK(hash_generators(p.tuple) == hash_generators(p.tuple));
    CHECK(hash_generators(p.tuple) != hash_generators(other));
}
