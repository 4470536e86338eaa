#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbitframes/linalg.hpp"
#include "orbitframes/model.hpp"
#include "orbitframes/presets.hpp"

#include <cmath>
#include <random>

using namespace orbitframes;

TEST_CASE("full-universe preset: trivial kernel, model is everything") {
    Preset p = preset_full_riesz(4, 3, 2);
    BasicTuple b = build_basic_tuple(p.tuple, p.universe);

    CHECK(b.rank() == p.universe.dim());
    CHECK(subspace_distance(b.n_basis, p.n0_basis) < 1e-10);
    CHECK(b.residuals.u_reduce < 1e-12);
    CHECK(b.residuals.u_star_reduce < 1e-12);
    CHECK(b.residuals.s_star_invariance < 1e-12);
    CHECK(b.residuals.compression_commute < 1e-12);
    CHECK(b.residuals.c_restricted_sigma_min > 0.9);

    IntertwiningReport ir = verify_intertwining(p.tuple, b);
    CHECK(ir.t_residual <= 1e-12 * ir.c_norm);
    CHECK(ir.t_inv_residual <= 1e-12 * ir.c_norm);
    CHECK(ir.l_residual <= 1e-12 * ir.c_norm);

    CHECK(riesz_classify(p.tuple, p.universe) == RieszClass::riesz);
}

TEST_CASE("synthetic model subspace is recovered exactly for the fixture itself") {
    Preset p = preset_monomial_fibers(5, 3, 2, {1, 3, 0, 2, 1});
    BasicTuple b = build_basic_tuple(p.tuple, p.universe);
    CHECK(b.rank() == p.n0_basis.cols());
    CHECK(subspace_distance(b.n_basis, p.n0_basis) < 1e-10);
    CHECK(riesz_classify(p.tuple, p.universe) == RieszClass::frame_proper);
}

TEST_CASE("uniqueness round trip: pushforward, rebuild, recover the same subspace") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        Preset p = preset_monomial_fibers(4, 3, 2, random_m_profile(4, 3, 500 + trial));
        MatrixXcd map = random_conditioned(p.tuple.dim_h, 100.0, rng);
        Tuple moved = pushforward(p.tuple, map);

        BasicTuple b = build_basic_tuple(moved, p.universe);
        CHECK(subspace_distance(b.n_basis, p.n0_basis) < 1e-8);

        IntertwiningReport ir = verify_intertwining(moved, b);
        CHECK(ir.t_residual <= 1e-8 * ir.c_norm);
        CHECK(ir.t_inv_residual <= 1e-8 * ir.c_norm);
        CHECK(ir.l_residual <= 1e-8 * ir.c_norm);
    }
}

TEST_CASE("bilateral round trip over a mask") {
    std::mt19937_64 rng(202);
    std::vector<std::uint8_t> mask(static_cast<size_t>(4 * 3), 0);
    for (size_t g = 0; g < mask.size(); ++g) mask[g] = (g % 3 != 1) ? 1 : 0;
    Preset p = preset_bilateral_mask(4, 3, mask);

    FrameReport base = frame_bounds(p.tuple, p.universe);
    CHECK(base.is_parseval);

    MatrixXcd map = random_conditioned(p.tuple.dim_h, 50.0, rng);
    Tuple moved = pushforward(p.tuple, map);
    BasicTuple b = build_basic_tuple(moved, p.universe);
    CHECK(subspace_distance(b.n_basis, p.n0_basis) < 1e-8);

    IntertwiningReport ir = verify_intertwining(moved, b);
    CHECK(ir.t_residual <= 1e-8 * ir.c_norm);
    CHECK(ir.l_residual <= 1e-8 * ir.c_norm);
    CHECK(ir.l_inv_residual <= 1e-8 * ir.c_norm);
}

TEST_CASE("idempotence: the basic tuple of a basic tuple has the same subspace") {
    Preset p = preset_monomial_fibers(4, 2, 1, {2, 1, 2, 0});
    BasicTuple b = build_basic_tuple(p.tuple, p.universe);
    Tuple again = basic_as_tuple(b);
    BasicTuple b2 = build_basic_tuple(again, p.universe);
    CHECK(subspace_distance(b.n_basis, b2.n_basis) < 1e-10);
}

TEST_CASE("kernel is U-reducing and S-invariant") {
    Preset p = preset_monomial_fibers(5, 3, 1, {2, 0, 3, 1, 2});
    std::mt19937_64 rng(33);
    Tuple moved = pushforward(p.tuple, random_conditioned(p.tuple.dim_h, 20.0, rng));
    KernelAnalysis ka = analyze_kernel(moved, p.universe);
    MatrixXcd kernel = null_space(ka.c_grid, 1e-10);
    REQUIRE(kernel.cols() == p.universe.dim() - p.tuple.dim_h);

    auto defect = [&](const MatrixXcd& moved_cols) {
        return operator_norm(moved_cols - kernel * (kernel.adjoint() * moved_cols));
    };
    CHECK(defect(shift_u_cols(p.universe, kernel)) < 1e-10);
    CHECK(defect(shift_u_cols(p.universe, kernel, true)) < 1e-10);
    CHECK(defect(shift_s_cols(p.universe, kernel)) < 1e-10);
}

TEST_CASE("every cyclic basic tuple passes the Parseval verification") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        Preset p = preset_monomial_fibers(5, 3, 2, random_m_profile(5, 3, seed));
        BasicTuple b = build_basic_tuple(p.tuple, p.universe);
        ParsevalCheck pc = verify_parseval_basic(b);
        CHECK(std::abs(pc.report.lower - 1.0) < 1e-10);
        CHECK(std::abs(pc.report.upper - 1.0) < 1e-10);
        CHECK(pc.projection_identity_residual < 1e-10);
    }
}

TEST_CASE("one-dimensional fibers: the phase system is still Parseval") {
    Preset p = preset_monomial_fibers(6, 3, 1, {1, 1, 1, 1, 1, 1});
    BasicTuple b = build_basic_tuple(p.tuple, p.universe);
    CHECK(b.rank() == 6);
    // A vanishes: the up-shift leaves every degree-zero fiber
    CHECK(operator_norm(b.s_comp) < 1e-12);
    ParsevalCheck pc = verify_parseval_basic(b);
    CHECK(std::abs(pc.report.lower - 1.0) < 1e-10);
    CHECK(std::abs(pc.report.upper - 1.0) < 1e-10);
}

TEST_CASE("build_basic_tuple rejects non-frames") {
    Tuple t;
    t.dim_h = 2;
    t.T = MatrixXcd::Identity(2, 2);
    t.L = 0.5 * MatrixXcd::Identity(2, 2);
    t.generators = {VectorXcd::Zero(2)};
    t.iteration = {IterationPolicy::Kind::cyclic, 1, 4};
    CHECK_THROWS_AS(build_basic_tuple(t, universe_for(t)), DomainError);
}

TEST_CASE("rank ambiguity near the cutoff is flagged, not resolved") {
    // second generator direction scaled into the decision band around
    // rank_rel_tol * sigma_max
    Tuple t;
    t.dim_h = 2;
    t.T = MatrixXcd::Identity(2, 2);
    t.T(1, 1) = -1.0;
    t.L = MatrixXcd::Zero(2, 2);
    t.generators = {VectorXcd::Zero(2)};
    t.generators[0][0] = 1.0;
    t.generators[0][1] = 1e-10;
    t.iteration = {IterationPolicy::Kind::cyclic, 2, 1};
    CHECK_THROWS_WITH_AS(build_basic_tuple(t, universe_for(t)),
                         doctest::Contains("kernel rank ambiguity"), DomainError);
}

TEST_CASE("corrupted synthesis columns break the intertwining residuals") {
    Preset p = preset_monomial_fibers(4, 2, 1, {2, 1, 2, 1});
    BasicTuple b = build_basic_tuple(p.tuple, p.universe);
    SynthesisOp op = synthesis(p.tuple, p.universe);

    IntertwiningReport clean = intertwining_residuals(p.tuple, p.universe, op.grid_matrix(), b.n_basis);
    CHECK(clean.max_relative() < 1e-10);

    op.columns.col(p.universe.flat(1, 0, 0)).setZero();
    IntertwiningReport bad = intertwining_residuals(p.tuple, p.universe, op.grid_matrix(), b.n_basis);
    CHECK(bad.t_residual > 1e-3);
}

TEST_CASE("verify_intertwining rejects mismatched provenance") {
    Preset p1 = preset_monomial_fibers(4, 2, 1, {2, 1, 2, 1});
    Preset p2 = preset_monomial_fibers(4, 2, 1, {2, 1, 2, 1});
    p2.tuple.generators[0] *= 2.0; // same spaces, different tuple
    BasicTuple b = build_basic_tuple(p1.tuple, p1.universe);
    CHECK_THROWS_WITH_AS(verify_intertwining(p2.tuple, b), doctest::Contains("provenance"), DomainError);
}

TEST_CASE("similarity: a tuple is similar to itself with the identity map") {
    Preset p = preset_monomial_fibers(4, 2, 2, {1, 2, 0, 2});
    SimilarityVerdict v = similarity(p.tuple, p.tuple, p.universe);
    CHECK(v.similar);
    CHECK(v.kernel_distance < 1e-12);
    REQUIRE(v.has_connecting_map);
    CHECK((v.connecting_map - MatrixXcd::Identity(p.tuple.dim_h, p.tuple.dim_h)).norm() < 1e-10);
    CHECK(v.certified);
}

TEST_CASE("similarity recovers the pushforward map") {
    std::mt19937_64 rng(77);
    Preset p = preset_monomial_fibers(5, 2, 1, {2, 1, 1, 2, 0});
    for (int trial = 0; trial < 5; ++trial) {
        MatrixXcd map = random_conditioned(p.tuple.dim_h, 30.0, rng);
        Tuple moved = pushforward(p.tuple, map);
        SimilarityVerdict v = similarity(p.tuple, moved, p.universe);
        CHECK(v.similar);
        CHECK(v.kernel_distance < 1e-9);
        REQUIRE(v.has_connecting_map);
        CHECK((v.connecting_map - map).norm() / map.norm() < 1e-8);
        CHECK(v.certified);
    }
}

TEST_CASE("similarity is symmetric and transitive on pushforwards") {
    std::mt19937_64 rng(88);
    Preset p = preset_monomial_fibers(4, 2, 1, {1, 2, 2, 1});
    Tuple a = pushforward(p.tuple, random_conditioned(p.tuple.dim_h, 10.0, rng));
    Tuple b = pushforward(p.tuple, random_conditioned(p.tuple.dim_h, 10.0, rng));

    SimilarityVerdict ab = similarity(a, b, p.universe);
    SimilarityVerdict ba = similarity(b, a, p.universe);
    CHECK(ab.similar);
    CHECK(ba.similar);
    CHECK(ab.kernel_distance == doctest::Approx(ba.kernel_distance).epsilon(1e-10));

    SimilarityVerdict at = similarity(a, p.tuple, p.universe);
    SimilarityVerdict tb = similarity(p.tuple, b, p.universe);
    CHECK(at.similar);
    CHECK(tb.similar);
    // transitivity margin: distances compose within twice the tolerance
    CHECK(ab.kernel_distance <= at.kernel_distance + tb.kernel_distance + 2e-7);
}

TEST_CASE("Parseval tuples declared similar are unitarily equivalent") {
    std::mt19937_64 rng(99);
    Preset p = preset_monomial_fibers(4, 3, 1, {2, 3, 1, 2});
    REQUIRE(frame_bounds(p.tuple, p.universe).is_parseval);

    MatrixXcd q = random_unitary(p.tuple.dim_h, rng);
    Tuple moved = pushforward(p.tuple, q);
    REQUIRE(frame_bounds(moved, p.universe).is_parseval);

    SimilarityVerdict v = similarity(p.tuple, moved, p.universe);
    REQUIRE(v.similar);
    REQUIRE(v.has_connecting_map);
    const MatrixXcd& c = v.connecting_map;
    CHECK((c.adjoint() * c - MatrixXcd::Identity(c.rows(), c.cols())).norm() < 1e-8);
}

TEST_CASE("similarity distinguishes genuinely different model subspaces") {
    Preset p1 = preset_monomial_fibers(4, 2, 1, {2, 1, 1, 2});
    Preset p2 = preset_monomial_fibers(4, 2, 1, {1, 2, 2, 1});
    REQUIRE(p1.n0_basis.cols() == p2.n0_basis.cols()); // same dim_h, different fibers
    SimilarityVerdict v = similarity(p1.tuple, p2.tuple, p1.universe);
    CHECK_FALSE(v.similar);
    CHECK(v.kernel_distance > 0.5);
}

TEST_CASE("similarity requires frames and matching shapes") {
    Preset p = preset_monomial_fibers(3, 2, 1, {1, 1, 1});
    Tuple zero = p.tuple;
    zero.generators[0].setZero();
    CHECK_THROWS_AS(similarity(p.tuple, zero, p.universe), DomainError);

    Preset q = preset_monomial_fibers(3, 2, 2, {1, 1, 1});
    CHECK_THROWS_AS(similarity(p.tuple, q.tuple, p.universe), DomainError);
}

TEST_CASE("riesz_classify covers all three classes") {
    Preset full = preset_full_riesz(3, 2, 1);
    CHECK(riesz_classify(full.tuple, full.universe) == RieszClass::riesz);

    Preset proper = preset_monomial_fibers(3, 2, 1, {1, 2, 1});
    CHECK(riesz_classify(proper.tuple, proper.universe) == RieszClass::frame_proper);

    Tuple zero = proper.tuple;
    zero.generators[0].setZero();
    CHECK(riesz_classify(zero, proper.universe) == RieszClass::not_frame);
}
