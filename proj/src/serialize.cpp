#include "orbitframes/serialize.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace orbitframes {

namespace {

double finite_or(double x, double fallback) {
    return std::isfinite(x) ? x : fallback;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

json complex_to_json(const cxd& z) { return json::array({z.real(), z.imag()}); }

cxd complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error("malformed complex value (expected [re, im])");
    return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const VectorXcd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
    return out;
}

VectorXcd vector_from_json(const json& j) {
    if (!j.is_array()) throw std::runtime_error("malformed vector");
    VectorXcd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    return v;
}

json matrix_to_json(const MatrixXcd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

MatrixXcd matrix_from_json(const json& j) {
    if (!j.is_array()) throw std::runtime_error("malformed matrix");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return MatrixXcd(0, 0);
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[static_cast<size_t>(r)].size()) != cols)
            throw std::runtime_error("ragged matrix rows");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(j[static_cast<size_t>(r)][static_cast<size_t>(c)]);
    }
    return m;
}

json to_json(const Universe& u) {
    json j{{"mode", to_string(u.mode)}, {"N_lambda", u.n_lambda}, {"n_gen", u.n_gen}};
    if (u.mode == Mode::unilateral)
        j["M_z"] = u.m_z;
    else
        j["N2"] = u.n2;
    return j;
}

Universe universe_from_json(const json& j) {
    Mode mode = mode_from_string(j.at("mode").get<std::string>());
    int second = mode == Mode::unilateral ? j.at("M_z").get<int>() : j.at("N2").get<int>();
    return make_universe(mode, j.at("N_lambda").get<int>(), second, j.at("n_gen").get<int>());
}

json to_json(const CoefField& f) {
    const Universe& u = f.universe;
    json data = json::array();
    if (u.mode == Mode::unilateral) {
        for (int t = 0; t < u.n_lambda; ++t) {
            json jt = json::array();
            for (int z = 0; z < u.m_z; ++z) {
                json jz = json::array();
                for (int i = 0; i < u.n_gen; ++i) jz.push_back(complex_to_json(f.values[u.flat(t, z, i)]));
                jt.push_back(std::move(jz));
            }
            data.push_back(std::move(jt));
        }
    } else {
        for (int t1 = 0; t1 < u.n_lambda; ++t1) {
            json jt = json::array();
            for (int t2 = 0; t2 < u.n2; ++t2) {
                json jz = json::array();
                for (int i = 0; i < u.n_gen; ++i) jz.push_back(complex_to_json(f.values[u.flat(t1, t2, i)]));
                jt.push_back(std::move(jz));
            }
            data.push_back(std::move(jt));
        }
    }
    return json{{"universe", to_json(u)}, {"data", std::move(data)}};
}

CoefField coef_field_from_json(const json& j) {
    Universe u = universe_from_json(j.at("universe"));
    const json& data = j.at("data");
    CoefField f = CoefField::zero(u);
    const int second = u.mode == Mode::unilateral ? u.m_z : u.n2;
    if (static_cast<int>(data.size()) != u.n_lambda) throw std::runtime_error("field data shape mismatch");
    for (int t = 0; t < u.n_lambda; ++t) {
        const json& jt = data[static_cast<size_t>(t)];
        if (static_cast<int>(jt.size()) != second) throw std::runtime_error("field data shape mismatch");
        for (int z = 0; z < second; ++z) {
            const json& jz = jt[static_cast<size_t>(z)];
            if (static_cast<int>(jz.size()) != u.n_gen) throw std::runtime_error("field data shape mismatch");
            for (int i = 0; i < u.n_gen; ++i)
                f.values[u.flat(t, z, i)] = complex_from_json(jz[static_cast<size_t>(i)]);
        }
    }
    return f;
}

json to_json(const IterationPolicy& p) {
    return json{{"mode", p.kind == IterationPolicy::Kind::cyclic ? "cyclic" : "truncated"},
                {"N_or_K", p.n_or_k},
                {"M_or_J", p.m_or_j}};
}

IterationPolicy iteration_from_json(const json& j) {
    IterationPolicy p;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "cyclic")
        p.kind = IterationPolicy::Kind::cyclic;
    else if (mode == "truncated")
        p.kind = IterationPolicy::Kind::truncated;
    else
        throw std::runtime_error("unknown iteration mode '" + mode + "'");
    p.n_or_k = j.at("N_or_K").get<int>();
    p.m_or_j = j.at("M_or_J").get<int>();
    return p;
}

json to_json(const Tuple& t) {
    json gens = json::array();
    for (const auto& w : t.generators) gens.push_back(vector_to_json(w));
    return json{{"dim", t.dim_h},          {"variant", to_string(t.variant)},
                {"iteration", to_json(t.iteration)}, {"T", matrix_to_json(t.T)},
                {"L", matrix_to_json(t.L)},          {"generators", std::move(gens)}};
}

Tuple tuple_from_json(const json& j) {
    Tuple t;
    t.dim_h = j.at("dim").get<int>();
    t.variant = mode_from_string(j.at("variant").get<std::string>());
    t.iteration = iteration_from_json(j.at("iteration"));
    t.T = matrix_from_json(j.at("T"));
    t.L = matrix_from_json(j.at("L"));
    for (const auto& g : j.at("generators")) t.generators.push_back(vector_from_json(g));
    return t;
}

json to_json(const Tolerances& tol) {
    return json{{"comm_tol", tol.comm_tol},       {"inv_tol_rel", tol.inv_tol_rel},
                {"parseval_tol", tol.parseval_tol}, {"frame_tol_rel", tol.frame_tol_rel},
                {"rank_rel_tol", tol.rank_rel_tol}, {"rank_gap_min", tol.rank_gap_min},
                {"sim_tol", tol.sim_tol},           {"red_tol", tol.red_tol},
                {"intertwine_rel", tol.intertwine_rel}, {"fiber_rel_tol", tol.fiber_rel_tol}};
}

Tolerances tolerances_from_json(const json& j) {
    Tolerances tol;
    tol.comm_tol = j.value("comm_tol", tol.comm_tol);
    tol.inv_tol_rel = j.value("inv_tol_rel", tol.inv_tol_rel);
    tol.parseval_tol = j.value("parseval_tol", tol.parseval_tol);
    tol.frame_tol_rel = j.value("frame_tol_rel", tol.frame_tol_rel);
    tol.rank_rel_tol = j.value("rank_rel_tol", tol.rank_rel_tol);
    tol.rank_gap_min = j.value("rank_gap_min", tol.rank_gap_min);
    tol.sim_tol = j.value("sim_tol", tol.sim_tol);
    tol.red_tol = j.value("red_tol", tol.red_tol);
    tol.intertwine_rel = j.value("intertwine_rel", tol.intertwine_rel);
    tol.fiber_rel_tol = j.value("fiber_rel_tol", tol.fiber_rel_tol);
    return tol;
}

json to_json(const TupleDiagnostics& d) {
    return json{{"ok", d.ok},
                {"failed_invariant", d.failed_invariant},
                {"commutator_norm", d.commutator_norm},
                {"commutator_scale", d.commutator_scale},
                {"sigma_min_T", d.sigma_min_t},
                {"sigma_max_T", d.sigma_max_t},
                {"sigma_min_L", d.sigma_min_l},
                {"sigma_max_L", d.sigma_max_l},
                {"cyclic_defect_T", d.cyclic_defect_t},
                {"cyclic_defect_L", d.cyclic_defect_l}};
}

json to_json(const FrameReport& r) {
    json spectrum = json::array();
    for (Eigen::Index i = 0; i < r.singular_spectrum.size(); ++i)
        spectrum.push_back(r.singular_spectrum[i]);
    json conv = json::array();
    for (const auto& e : r.convergence)
        conv.push_back(json{{"K", e.k}, {"J", e.j}, {"lower", e.lower}, {"upper", e.upper}});
    return json{{"lower", r.lower},
                {"upper", r.upper},
                {"is_frame", r.is_frame},
                {"is_parseval", r.is_parseval},
                {"is_riesz", r.is_riesz},
                {"kernel_dim", r.kernel_dim},
                {"singular_spectrum", std::move(spectrum)},
                {"convergence", std::move(conv)},
                {"converged", r.converged},
                {"tolerances", to_json(r.tol)}};
}

json to_json(const BasicTuple& b) {
    json phis = json::array();
    for (const auto& p : b.phis) phis.push_back(vector_to_json(p));
    const InvariantResiduals& r = b.residuals;
    json residuals{{"orthonormality", r.orthonormality},
                   {"u_reduce", r.u_reduce},
                   {"u_star_reduce", r.u_star_reduce},
                   {"s_star_invariance", r.s_star_invariance},
                   {"compression_commute", r.compression_commute},
                   {"c_restricted_sigma_min", r.c_restricted_sigma_min},
                   {"kernel_gap", finite_or(r.kernel_gap, -1.0)}};
    return json{{"universe", to_json(b.universe)},
                {"variant", to_string(b.variant)},
                {"N_basis", matrix_to_json(b.n_basis)},
                {"U_on_N", matrix_to_json(b.u_comp)},
                {"A", matrix_to_json(b.s_comp)},
                {"phis", std::move(phis)},
                {"C_restricted", matrix_to_json(b.c_restricted)},
                {"residuals", std::move(residuals)}};
}

json to_json(const IntertwiningReport& r) {
    return json{{"c_norm", r.c_norm},
                {"T_residual", r.t_residual},
                {"T_inv_residual", r.t_inv_residual},
                {"L_residual", r.l_residual},
                {"L_inv_residual", r.l_inv_residual},
                {"max_relative", r.max_relative()}};
}

json to_json(const SimilarityVerdict& v) {
    json j{{"similar", v.similar},
           {"kernel_distance", v.kernel_distance},
           {"certified", v.certified},
           {"residuals", json{{"T", v.res_t}, {"L", v.res_l}, {"generators", v.res_gen}}}};
    if (v.has_connecting_map) j["connecting_map"] = matrix_to_json(v.connecting_map);
    return j;
}

json to_json(const RangeFunction& rf) {
    json fibers = json::array();
    for (const auto& f : rf.fibers) fibers.push_back(matrix_to_json(f));
    json gaps = json::array();
    for (double g : rf.gaps) gaps.push_back(finite_or(g, -1.0));
    return json{{"universe", to_json(rf.universe)},
                {"dims", rf.dims},
                {"sigma_support", rf.sigma_support},
                {"fibers", std::move(fibers)},
                {"gaps", std::move(gaps)}};
}

json to_json(const InnerFactor& f) {
    json factors = json::array();
    for (int g : f.sigma_support) {
        factors.push_back(json{{"grid", g},
                               {"phi", vector_to_json(f.phi[static_cast<size_t>(g)])},
                               {"coverage", f.coverage[static_cast<size_t>(g)] == FiberCoverage::exact
                                                ? "exact"
                                                : "truncated"}});
    }
    return json{{"universe", to_json(f.universe)},
                {"sigma_support", f.sigma_support},
                {"factors", std::move(factors)}};
}

json to_json(const ChiMask& m) {
    json mask = json::array();
    for (auto b : m.mask) mask.push_back(static_cast<int>(b));
    return json{{"universe", to_json(m.universe)},
                {"mask", std::move(mask)},
                {"inclusion_residual", m.inclusion_residual}};
}

json to_json(const MembershipVerdict& v) {
    return json{{"in_V", v.in_v},
                {"similar", v.similar},
                {"kernel_distance", v.kernel_distance},
                {"consistent", v.consistent},
                {"frame", to_json(v.frame)},
                {"similarity", to_json(v.sim)}};
}

json to_json(const GeneratorClassReport& r) {
    json hashes = json::array();
    for (auto h : r.candidate_hashes) {
        std::ostringstream os;
        os << std::hex << h;
        hashes.push_back(os.str());
    }
    json frames = json::array();
    for (const auto& f : r.frame_reports) frames.push_back(to_json(f));
    json dist = json::array();
    for (Eigen::Index i = 0; i < r.kernel_distance.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j2 = 0; j2 < r.kernel_distance.cols(); ++j2)
            row.push_back(r.kernel_distance(i, j2));
        dist.push_back(std::move(row));
    }
    return json{{"candidates", std::move(hashes)},
                {"frame_reports", std::move(frames)},
                {"kernel_distance", std::move(dist)},
                {"components", r.component},
                {"class_count", r.class_count},
                {"seed", r.seed},
                {"tolerances", to_json(r.tol)}};
}

json make_report(const std::string& kind, json payload, const Tolerances& tol, std::uint64_t seed,
                 bool with_timestamp) {
    json meta{{"tool", kToolName}, {"version", kToolVersion}, {"seed", seed}, {"tolerances", to_json(tol)}};
    if (with_timestamp) meta["generated_at"] = iso_timestamp();
    return json{{"kind", kind}, {"meta", std::move(meta)}, {"result", std::move(payload)}};
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    json j;
    in >> j;
    return j;
}

void write_spectrum_csv(const std::filesystem::path& path, const VectorXd& spectrum) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "index,value\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) out << i << "," << spectrum[i] << "\n";
}

void write_dims_csv(const std::filesystem::path& path, const RangeFunction& rf) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    const Universe& u = rf.universe;
    if (u.mode == Mode::unilateral) {
        out << "t,dim\n";
        for (int t = 0; t < u.n_lambda; ++t) out << t << "," << rf.dims[static_cast<size_t>(t)] << "\n";
    } else {
        out << "t1,t2,dim\n";
        for (int t1 = 0; t1 < u.n_lambda; ++t1)
            for (int t2 = 0; t2 < u.n2; ++t2)
                out << t1 << "," << t2 << "," << rf.dims[static_cast<size_t>(t1 * u.n2 + t2)] << "\n";
    }
}

void write_mask_csv(const std::filesystem::path& path, const ChiMask& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    const Universe& u = m.universe;
    out << "t1,t2,in_E\n";
    for (int t1 = 0; t1 < u.n_lambda; ++t1)
        for (int t2 = 0; t2 < u.n2; ++t2)
            out << t1 << "," << t2 << "," << static_cast<int>(m.mask[static_cast<size_t>(t1 * u.n2 + t2)])
                << "\n";
}

void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << m(r, c) << (c + 1 == m.cols() ? "" : ",");
        out << "\n";
    }
}

} // namespace orbitframes
