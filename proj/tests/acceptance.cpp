// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Every tolerance is pinned here, in code; the budgets are wall-clock.

#include "orbitframes/fibers.hpp"
#include "orbitframes/genlab.hpp"
#include "orbitframes/linalg.hpp"
#include "orbitframes/model.hpp"
#include "orbitframes/presets.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace orbitframes;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

CoefField random_field(const Universe& u, std::mt19937_64& rng) {
    CoefField f = CoefField::zero(u);
    std::normal_distribution<double> g(0.0, 1.0);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = cxd(g(rng), g(rng));
    return f;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

// 1. frame bounds of randomized synthetic basic tuples equal 1 within 1e-8
Outcome parseval_law() {
    struct Size {
        int n, m, g;
    };
    const std::vector<Size> sizes = {{4, 3, 1}, {6, 4, 2},  {8, 5, 2},  {8, 8, 3},  {12, 6, 2},
                                     {16, 8, 3}, {16, 4, 1}, {10, 8, 3}, {16, 8, 2}, {5, 7, 3}};
    double worst = 0.0;
    for (size_t i = 0; i < sizes.size(); ++i) {
        const Size& s = sizes[i];
        Preset p = preset_monomial_fibers(s.n, s.m, s.g, random_m_profile(s.n, s.m, 1000 + i));
        FrameReport rep = frame_bounds(p.tuple, p.universe);
        worst = std::max({worst, std::abs(rep.lower - 1.0), std::abs(rep.upper - 1.0)});
    }
    Outcome o;
    o.pass = worst <= 1e-8;
    o.detail = "worst |bound-1| = " + fmt(worst) + " over " + std::to_string(sizes.size()) + " presets";
    return o;
}

// 2. pushforward + rebuild recovers the unique model subspace
Outcome uniqueness_round_trip() {
    std::mt19937_64 rng(2024);
    double worst_dist = 0.0, worst_res = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
        Preset p = preset_monomial_fibers(6, 4, 2, random_m_profile(6, 4, 2000 + seed));
        Tuple moved = pushforward(p.tuple, random_conditioned(p.tuple.dim_h, 100.0, rng));
        BasicTuple b = build_basic_tuple(moved, p.universe);
        worst_dist = std::max(worst_dist, subspace_distance(b.n_basis, p.n0_basis));
        IntertwiningReport ir = verify_intertwining(moved, b);
        worst_res = std::max(worst_res, ir.max_relative());
    }
    for (int seed = 0; seed < 10; ++seed) {
        std::mt19937_64 mask_rng(3000 + seed);
        std::vector<std::uint8_t> mask(20, 0);
        int kept = 0;
        for (auto& m : mask) kept += (m = mask_rng() % 2);
        if (kept == 0) mask[0] = 1;
        Preset p = preset_bilateral_mask(5, 4, mask);
        Tuple moved = pushforward(p.tuple, random_conditioned(p.tuple.dim_h, 100.0, rng));
        BasicTuple b = build_basic_tuple(moved, p.universe);
        worst_dist = std::max(worst_dist, subspace_distance(b.n_basis, p.n0_basis));
        IntertwiningReport ir = verify_intertwining(moved, b);
        worst_res = std::max(worst_res, ir.max_relative());
    }
    Outcome o;
    o.pass = worst_dist <= 1e-7 && worst_res <= 1e-8;
    o.detail = "worst projector distance = " + fmt(worst_dist) + ", worst intertwining = " +
               fmt(worst_res) + " (10 unilateral + 10 bilateral seeds)";
    return o;
}

// 3. geometric-diagonal bounds against the summed frame-operator oracle
Outcome geometric_oracle() {
    const int j_cutoff = 50;
    Preset p = preset_geometric_diag(j_cutoff);
    FrameReport rep = frame_bounds(p.tuple, p.universe);

    auto partial = [&](double q) { return (1.0 - std::pow(q, j_cutoff)) / (1.0 - q); };
    const double s00 = partial(0.25), s01 = partial(1.0 / 6.0), s11 = partial(1.0 / 9.0);
    const double tr = s00 + s11, det = s00 * s11 - s01 * s01;
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    const double a_ref = (tr - disc) / 2.0, b_ref = (tr + disc) / 2.0;

    Outcome o;
    const double da = std::abs(rep.lower - a_ref), db = std::abs(rep.upper - b_ref);
    const double da_named = std::abs(rep.lower - 0.02466), db_named = std::abs(rep.upper - 2.43368);
    o.pass = da <= 1e-4 && db <= 1e-4 && da_named <= 1e-4 && db_named <= 1e-4;
    o.detail = "A = " + std::to_string(rep.lower) + ", B = " + std::to_string(rep.upper) +
               ", oracle deviation = " + fmt(std::max(da, db));
    return o;
}

// 4. commutant pushes of the generator: membership and similarity agree
Outcome similarity_decision() {
    Preset p = preset_monomial_fibers(4, 3, 1, {2, 1, 3, 0});
    CommutantBasis cb = commutant_basis(p.tuple.T, p.tuple.L);
    double worst_res = 0.0;
    int disagreements = 0, in_count = 0;
    const int samples = 50;
    for (int s = 0; s < samples; ++s) {
        MatrixXcd b = sample_invertible_commutant(cb, 4000 + static_cast<std::uint64_t>(s));
        MembershipVerdict v = membership_V(p.tuple, b * p.tuple.generators[0], p.universe);
        if (!v.consistent) ++disagreements;
        if (v.in_v) ++in_count;
        if (v.sim.has_connecting_map)
            worst_res = std::max({worst_res, v.sim.res_t, v.sim.res_l, v.sim.res_gen});
    }
    Outcome o;
    o.pass = in_count == samples && disagreements == 0 && worst_res <= 1e-7;
    o.detail = std::to_string(in_count) + "/" + std::to_string(samples) +
               " in V, disagreements = " + std::to_string(disagreements) +
               ", worst intertwining = " + fmt(worst_res);
    return o;
}

// 5. the two multi-generator extensions are frames and never similar
Outcome remark_counterexample() {
    Remark49Pair pair = preset_remark49_pair(4, 3, 2);
    MultigenCounterexample ce = counterexample_multigen(pair.base.tuple);
    const double lower = std::min(ce.report.frame_reports[0].lower, ce.report.frame_reports[1].lower);
    const double dist = ce.report.kernel_distance(0, 1);

    bool stable = true;
    Universe u = universe_for(ce.plus);
    for (double st : {1e-9, 1e-8, 1e-7, 1e-6, 1e-5}) {
        Tolerances tol;
        tol.sim_tol = st;
        stable = stable && class_census({ce.plus, ce.minus}, u, tol).class_count == 2;
    }

    Outcome o;
    o.pass = lower >= 1e-6 && dist >= 0.1 && stable;
    o.detail = "lower bounds >= " + fmt(lower) + ", kernel distance = " + fmt(dist) +
               (stable ? ", stable over sim_tol in [1e-9, 1e-5]" : ", UNSTABLE verdict");
    return o;
}

// 6. global projection equals pointwise fiber projection
Outcome helson_identity() {
    std::mt19937_64 rng(6001);
    double worst = 0.0;
    int pairs = 0;
    for (int round = 0; round < 20; ++round) {
        Universe u = (round % 2 == 0) ? make_universe(Mode::unilateral, 4 + round % 5, 3, 2)
                                      : make_universe(Mode::bilateral, 4 + round % 4, 5, 2);
        int n_gen_fields = 1 + static_cast<int>(rng() % 3);
        std::vector<CoefField> gens;
        for (int a = 0; a < n_gen_fields; ++a) gens.push_back(random_field(u, rng));
        MatrixXcd global = orbit_span_basis(gens, u);
        RangeFunction rf = compute_range_function(gens, u);
        for (int trial = 0; trial < 5; ++trial) {
            worst = std::max(worst, helson_projection_check(global, rf, random_field(u, rng)));
            ++pairs;
        }
    }
    Outcome o;
    o.pass = worst <= 1e-10 && pairs >= 100;
    o.detail = "worst residual = " + fmt(worst) + " over " + std::to_string(pairs) + " pairs";
    return o;
}

// 7. chi_E reconstruction on random bilateral masks
Outcome chi_e_reconstruction() {
    std::mt19937_64 rng(7001);
    double worst = 0.0;
    int exact = 0;
    const int total = 10;
    for (int round = 0; round < total; ++round) {
        const int n1 = (round == total - 1) ? 32 : 6 + 2 * (round % 4);
        const int n2 = (round == total - 1) ? 32 : 8;
        Universe u = make_universe(Mode::bilateral, n1, n2, 1);
        std::vector<std::uint8_t> mask(static_cast<size_t>(u.grid_count()), 0);
        int kept = 0;
        for (auto& m : mask) kept += (m = rng() % 2);
        if (kept == 0) mask[0] = 1;

        MatrixXcd basis;
        if (round == total - 1) {
            // large grid: the mask subspace directly, recombined so the
            // detection cannot read the answer off unit columns
            std::vector<int> sel;
            for (int g = 0; g < u.grid_count(); ++g)
                if (mask[static_cast<size_t>(g)]) sel.push_back(g);
            MatrixXcd cols = MatrixXcd::Zero(u.dim(), static_cast<Eigen::Index>(sel.size()));
            for (size_t c = 0; c < sel.size(); ++c) cols(sel[c], static_cast<Eigen::Index>(c)) = 1.0;
            basis = cols * random_unitary(static_cast<int>(sel.size()), rng);
        } else {
            CoefField gen = CoefField::zero(u);
            std::normal_distribution<double> g(0.0, 1.0);
            for (int p = 0; p < u.grid_count(); ++p)
                if (mask[static_cast<size_t>(p)]) gen.values[p] = cxd(1.0 + std::abs(g(rng)), g(rng));
            basis = orbit_span_basis({gen}, u);
        }

        ChiMask detected = chi_e_detect(basis, u);
        if (detected.mask == mask) ++exact;
        worst = std::max(worst, detected.inclusion_residual);
    }
    Outcome o;
    o.pass = exact == total && worst <= 1e-10;
    o.detail = std::to_string(exact) + "/" + std::to_string(total) +
               " masks recovered exactly, worst inclusion residual = " + fmt(worst);
    return o;
}

// 8. Beurling generators of monomial fibers and their resynthesis
Outcome inner_factor_fidelity() {
    std::mt19937_64 rng(8001);
    double worst_coeff = 0.0, worst_dist = 0.0;
    bool all_exact = true;
    for (int round = 0; round < 5; ++round) {
        const int n = 8, m = 6;
        Universe u = make_universe(Mode::unilateral, n, m, 1);
        std::vector<int> lo(static_cast<size_t>(n));
        for (auto& v : lo) v = static_cast<int>(rng() % (m + 1)); // m means an empty fiber
        std::vector<int> sel;
        for (int t = 0; t < n; ++t)
            for (int j = lo[static_cast<size_t>(t)]; j < m; ++j) sel.push_back(u.flat(t, j, 0));
        if (sel.empty()) {
            lo[0] = 0;
            for (int j = 0; j < m; ++j) sel.push_back(u.flat(0, j, 0));
        }
        MatrixXcd n_perp = MatrixXcd::Zero(u.dim(), static_cast<Eigen::Index>(sel.size()));
        for (size_t c = 0; c < sel.size(); ++c) n_perp(sel[c], static_cast<Eigen::Index>(c)) = 1.0;

        RangeFunction rf = range_function_of_subspace(n_perp, u);
        InnerFactor factor = extract_inner_factor(rf, u);
        for (int t : factor.sigma_support) {
            const VectorXcd& phi = factor.phi[static_cast<size_t>(t)];
            VectorXcd expect = VectorXcd::Zero(m);
            expect[lo[static_cast<size_t>(t)]] = 1.0;
            worst_coeff = std::max(worst_coeff, (phi - expect).norm());
            all_exact = all_exact && factor.coverage[static_cast<size_t>(t)] == FiberCoverage::exact;
        }
        worst_dist = std::max(worst_dist, subspace_distance(resynthesize_from_inner(factor), n_perp));
    }
    Outcome o;
    o.pass = all_exact && worst_coeff <= 1e-10 && worst_dist <= 1e-10;
    o.detail = "worst generator deviation = " + fmt(worst_coeff) +
               ", worst resynthesis distance = " + fmt(worst_dist) +
               (all_exact ? "" : ", NOT all flagged exact");
    return o;
}

// 9. exactness of the shift calculus on universes up to dim 4096
Outcome lattice_exactness() {
    std::mt19937_64 rng(9001);
    double worst = 0.0;
    const std::vector<Universe> universes = {make_universe(Mode::unilateral, 256, 16, 1),
                                             make_universe(Mode::unilateral, 64, 8, 8),
                                             make_universe(Mode::bilateral, 64, 64, 1)};
    for (const Universe& u : universes) {
        for (int trial = 0; trial < 5; ++trial) {
            CoefField f = random_field(u, rng), g = random_field(u, rng);
            const double scale = norm(f) * norm(g);
            worst = std::max(worst, std::abs(inner(apply_U(f), apply_U(g)) - inner(f, g)) / scale);
            worst = std::max(worst, (apply_U_star(apply_U(f)).values - f.values).norm() / f.values.norm());
            if (u.mode == Mode::unilateral) {
                worst = std::max(
                    worst, std::abs(inner(apply_S_hat(f).first, g) - inner(f, apply_S_hat_star(g))) / scale);
                CoefField us = apply_U(apply_S_hat(f).first);
                CoefField su = apply_S_hat(apply_U(f)).first;
                worst = std::max(worst, (us.values - su.values).norm() / f.values.norm());
            } else {
                CoefField ab = apply_U1(apply_U2(f)), ba = apply_U2(apply_U1(f));
                worst = std::max(worst, (ab.values - ba.values).norm() / f.values.norm());
                worst = std::max(worst, std::abs(norm(apply_U2(f)) - norm(f)) / norm(f));
            }
        }
        // orthonormality of the canonical basis on sampled index pairs
        const int second = u.mode == Mode::unilateral ? u.m_z : u.n2;
        auto draw = [&]() {
            return BasisIndex{static_cast<int>(rng() % static_cast<std::uint64_t>(u.n_lambda)),
                              static_cast<int>(rng() % static_cast<std::uint64_t>(second)),
                              static_cast<int>(rng() % static_cast<std::uint64_t>(u.n_gen))};
        };
        for (int pair = 0; pair < 150; ++pair) {
            BasisIndex a = draw(), b = draw();
            cxd gram = inner(basis_element(u, a), basis_element(u, b));
            worst = std::max(worst, std::abs(gram - (a == b ? cxd(1.0) : cxd(0.0))));
        }
        for (int diag = 0; diag < 50; ++diag) {
            BasisIndex a = draw();
            worst = std::max(worst, std::abs(inner(basis_element(u, a), basis_element(u, a)) - cxd(1.0)));
        }
    }
    Outcome o;
    o.pass = worst <= 1e-12;
    o.detail = "worst defect = " + fmt(worst) + " over 3 universes of dim 4096";
    return o;
}

struct Criterion {
    std::string label;
    std::function<Outcome()> run;
    double budget_seconds; // 0 = no budget
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"basic tuples are Parseval within 1e-8", parseval_law, 10.0},
        {"pushforward/rebuild uniqueness round trip", uniqueness_round_trip, 30.0},
        {"geometric-diagonal frame bounds match the summed oracle", geometric_oracle, 0.0},
        {"membership and similarity verdicts coincide on commutant pushes", similarity_decision, 0.0},
        {"multi-generator extensions are frames but never similar", remark_counterexample, 0.0},
        {"pointwise projection identity", helson_identity, 0.0},
        {"chi_E mask reconstruction", chi_e_reconstruction, 0.0},
        {"inner-factor extraction and resynthesis", inner_factor_fidelity, 0.0},
        {"shift calculus exact at dim 4096", lattice_exactness, 5.0},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        const bool in_budget = c.budget_seconds <= 0.0 || secs <= c.budget_seconds;
        const bool pass = o.pass && in_budget;
        std::string budget_note =
            in_budget ? "" : ", over budget " + std::to_string(c.budget_seconds) + " s";
        std::printf("[%s] %zu. %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", i + 1, c.label.c_str(),
                    o.detail.c_str(), secs, budget_note.c_str());
        if (!pass) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
