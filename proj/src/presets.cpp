#include "orbitframes/presets.hpp"

#include <random>

namespace orbitframes {

namespace {

/// Tuple carved from a coordinate-selection subspace: the compressions of the
/// universe shifts expressed in the selected unit-vector basis.
Preset from_selection(const std::string& name, const Universe& u, const std::vector<int>& flat_indices) {
    if (flat_indices.empty())
        throw DomainError("preset parameters", name + ": empty model subspace");
    const int r = static_cast<int>(flat_indices.size());
    MatrixXcd n0 = MatrixXcd::Zero(u.dim(), r);
    for (int c = 0; c < r; ++c) n0(flat_indices[static_cast<size_t>(c)], c) = 1.0;

    Preset p;
    p.name = name;
    p.universe = u;
    p.n0_basis = n0;
    p.tuple.dim_h = r;
    p.tuple.T = n0.adjoint() * shift_u_cols(u, n0);
    p.tuple.L = n0.adjoint() * shift_s_cols(u, n0);
    p.tuple.variant = u.mode;
    p.tuple.iteration.kind = IterationPolicy::Kind::cyclic;
    p.tuple.iteration.n_or_k = u.n_lambda;
    p.tuple.iteration.m_or_j = u.mode == Mode::unilateral ? u.m_z : u.n2;
    p.tuple.generators.reserve(static_cast<size_t>(u.n_gen));
    for (int i = 0; i < u.n_gen; ++i)
        p.tuple.generators.push_back(n0.adjoint() * basis_element(u, BasisIndex{0, 0, i}).vec());
    return p;
}

} // namespace

Preset preset_full_riesz(int n_lambda, int m_z, int n_gen) {
    Universe u = make_universe(Mode::unilateral, n_lambda, m_z, n_gen);
    std::vector<int> all(static_cast<size_t>(u.dim()));
    for (int i = 0; i < u.dim(); ++i) all[static_cast<size_t>(i)] = i;
    return from_selection("full_riesz", u, all);
}

Preset preset_monomial_fibers(int n_lambda, int m_z, int n_gen, const std::vector<int>& m_profile) {
    Universe u = make_universe(Mode::unilateral, n_lambda, m_z, n_gen);
    if (static_cast<int>(m_profile.size()) != n_lambda)
        throw DomainError("preset parameters", "m-profile length must equal N_lambda");
    std::vector<int> sel;
    for (int t = 0; t < n_lambda; ++t) {
        const int m = m_profile[static_cast<size_t>(t)];
        if (m < 0 || m > m_z)
            throw DomainError("preset parameters",
                              "m(t) = " + std::to_string(m) + " outside [0, M_z] at t = " + std::to_string(t));
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < n_gen; ++i) sel.push_back(u.flat(t, j, i));
    }
    return from_selection("monomial_fibers", u, sel);
}

Preset preset_bilateral_mask(int n1, int n2, const std::vector<std::uint8_t>& mask) {
    Universe u = make_universe(Mode::bilateral, n1, n2, 1);
    if (static_cast<int>(mask.size()) != u.grid_count())
        throw DomainError("preset parameters", "mask length must equal N1*N2");
    std::vector<int> sel;
    for (int g = 0; g < u.grid_count(); ++g)
        if (mask[static_cast<size_t>(g)]) sel.push_back(g); // n_gen = 1: flat index == grid index
    return from_selection("bilateral_mask", u, sel);
}

Preset preset_geometric_diag(int j_cutoff) {
    if (j_cutoff < 1) throw DomainError("preset parameters", "J must be >= 1");
    Preset p;
    p.name = "geometric_diag";
    p.universe = make_universe(Mode::unilateral, 1, j_cutoff, 1);
    p.n0_basis = MatrixXcd(p.universe.dim(), 0);
    p.tuple.dim_h = 2;
    p.tuple.T = MatrixXcd::Identity(2, 2);
    p.tuple.L = MatrixXcd::Zero(2, 2);
    p.tuple.L(0, 0) = 0.5;
    p.tuple.L(1, 1) = 1.0 / 3.0;
    p.tuple.generators = {VectorXcd::Ones(2)};
    p.tuple.variant = Mode::unilateral;
    p.tuple.iteration.kind = IterationPolicy::Kind::cyclic;
    p.tuple.iteration.n_or_k = 1;
    p.tuple.iteration.m_or_j = j_cutoff;
    return p;
}

Remark49Pair preset_remark49_pair(int n_lambda, int m_z, int n_gen) {
    if (n_gen < 2)
        throw DomainError("preset parameters", "the construction needs at least two generators");
    // mixed fiber profile so the base has a nontrivial kernel
    std::vector<int> profile(static_cast<size_t>(n_lambda));
    for (int t = 0; t < n_lambda; ++t)
        profile[static_cast<size_t>(t)] = 1 + (t % m_z);

    Remark49Pair out;
    out.base = preset_monomial_fibers(n_lambda, m_z, n_gen, profile);
    out.base.name = "remark49_base";
    const VectorXcd& v0 = out.base.tuple.generators[0];
    const VectorXcd& v1 = out.base.tuple.generators[1];
    out.plus = out.base.tuple;
    out.plus.generators.push_back(v0 + v1);
    out.minus = out.base.tuple;
    out.minus.generators.push_back(v0 - v1);
    return out;
}

std::vector<int> random_m_profile(int n_lambda, int m_z, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, m_z);
    std::vector<int> profile(static_cast<size_t>(n_lambda));
    bool any = false;
    for (int t = 0; t < n_lambda; ++t) {
        profile[static_cast<size_t>(t)] = pick(rng);
        any = any || profile[static_cast<size_t>(t)] > 0;
    }
    if (!any) profile[0] = 1;
    return profile;
}

} // namespace orbitframes
