// Command-line front end: tuple ingestion, preset generation, analysis
// pipelines and report emission. Exit codes: 0 success, 1 domain failure
// (non-frame where a frame is required, structural failure; stderr names the
// violated invariant), 2 I/O or configuration error.

#include "CLI11.hpp"

#include "orbitframes/genlab.hpp"
#include "orbitframes/presets.hpp"
#include "orbitframes/serialize.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace orbitframes;

namespace {

struct CommonOpts {
    std::string out_dir = ".";
    std::string format = "both"; // json|csv|both
    std::uint64_t seed = 0;
    bool no_timestamp = false;
    Tolerances tol;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out_dir, "output directory (created if missing)");
    cmd->add_option("--format", o.format, "report format: json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    cmd->add_option("--seed", o.seed, "random seed, recorded verbatim in reports");
    cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp for byte-stable output");
    cmd->add_option("--tol-comm", o.tol.comm_tol, "commutator tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-inv", o.tol.inv_tol_rel, "invertibility tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-parseval", o.tol.parseval_tol, "Parseval tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-frame", o.tol.frame_tol_rel, "frame positivity threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-rank", o.tol.rank_rel_tol, "kernel rank cutoff")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-gap", o.tol.rank_gap_min, "minimal rank-decision gap")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-sim", o.tol.sim_tol, "similarity tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-red", o.tol.red_tol, "reducing-defect tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-intertwine", o.tol.intertwine_rel, "intertwining certification tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-fiber", o.tol.fiber_rel_tol, "per-fiber rank cutoff")->check(CLI::PositiveNumber);
}

fs::path ensure_out(const CommonOpts& o) {
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    return dir;
}

void emit(const CommonOpts& o, const std::string& kind, const json& payload,
          const std::function<void(const fs::path&)>& csv_writer = {}) {
    fs::path dir = ensure_out(o);
    if (o.format != "csv")
        write_json_file(dir / (kind + ".json"), make_report(kind, payload, o.tol, o.seed, !o.no_timestamp));
    if (o.format != "json" && csv_writer) csv_writer(dir);
}

Tuple load_tuple(const std::string& path) { return tuple_from_json(read_json_file(path)); }

std::vector<CoefField> load_fields(const std::vector<std::string>& paths) {
    if (paths.empty()) throw std::runtime_error("at least one --fields file is required");
    std::vector<CoefField> fields;
    fields.reserve(paths.size());
    for (const auto& p : paths) fields.push_back(coef_field_from_json(read_json_file(p)));
    for (const auto& f : fields)
        if (f.universe != fields.front().universe)
            throw std::runtime_error("field files live on different universes");
    return fields;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::string token;
    std::istringstream in(csv);
    while (std::getline(in, token, ',')) out.push_back(std::stoi(token));
    return out;
}

int run_analyze(const CommonOpts& o, const std::string& tuple_path) {
    Tuple t = load_tuple(tuple_path);
    Universe u = universe_for(t);
    TupleDiagnostics diag = validate_tuple(t, o.tol);
    FrameReport rep = frame_bounds(t, u, o.tol);
    json payload{{"universe", to_json(u)}, {"diagnostics", to_json(diag)}, {"frame", to_json(rep)}};
    emit(o, "analyze", payload,
         [&](const fs::path& dir) { write_spectrum_csv(dir / "spectrum.csv", rep.singular_spectrum); });
    std::cout << "A = " << rep.lower << ", B = " << rep.upper << ", frame = " << std::boolalpha
              << rep.is_frame << ", parseval = " << rep.is_parseval << ", riesz = " << rep.is_riesz
              << "\n";
    return 0;
}

int run_model(const CommonOpts& o, const std::string& tuple_path) {
    Tuple t = load_tuple(tuple_path);
    Universe u = universe_for(t);
    BasicTuple b = build_basic_tuple(t, u, o.tol);
    IntertwiningReport ir = verify_intertwining(t, b, o.tol);
    ParsevalCheck pc = verify_parseval_basic(b, o.tol);
    RieszClass cls = riesz_classify(t, u, o.tol);
    json payload{{"basic_tuple", to_json(b)},
                 {"intertwining", to_json(ir)},
                 {"parseval", to_json(pc.report)},
                 {"projection_identity_residual", pc.projection_identity_residual},
                 {"classification", to_string(cls)},
                 {"kernel_dim", u.dim() - b.rank()}};
    emit(o, "model", payload);
    std::cout << "kernel dim = " << u.dim() - b.rank() << ", classification = " << to_string(cls)
              << ", max intertwining residual = " << ir.max_relative() << "\n";
    return 0;
}

int run_similar(const CommonOpts& o, const std::string& a_path, const std::string& b_path) {
    Tuple a = load_tuple(a_path);
    Tuple b = load_tuple(b_path);
    Universe u = universe_for(a);
    SimilarityVerdict v = similarity(a, b, u, o.tol);
    emit(o, "similar", to_json(v));
    std::cout << "similar = " << std::boolalpha << v.similar
              << ", kernel distance = " << v.kernel_distance;
    if (v.similar && !v.certified) std::cout << " (kernel criterion; certification residuals attached)";
    std::cout << "\n";
    return 0;
}

int run_fibers(const CommonOpts& o, const std::vector<std::string>& field_paths) {
    std::vector<CoefField> gens = load_fields(field_paths);
    const Universe& u = gens.front().universe;
    RangeFunction rf = compute_range_function(gens, u, o.tol);
    emit(o, "fibers", to_json(rf), [&](const fs::path& dir) {
        write_dims_csv(dir / "dims.csv", rf);
        std::ofstream sup(dir / "sigma_support.csv");
        sup << "grid\n";
        for (int g : rf.sigma_support) sup << g << "\n";
    });
    std::cout << "total fiber dimension = " << rf.total_dim()
              << ", support size = " << rf.sigma_support.size() << " of " << u.grid_count() << "\n";
    return 0;
}

int run_inner(const CommonOpts& o, const std::vector<std::string>& field_paths) {
    std::vector<CoefField> gens = load_fields(field_paths);
    const Universe& u = gens.front().universe;
    // the fields generate N-perp; close under both shifts before extracting
    MatrixXcd basis = shift_closed_span_basis(gens, u, o.tol);
    RangeFunction rf = range_function_of_subspace(basis, u, o.tol);
    InnerFactor factor = extract_inner_factor(rf, u, o.tol);
    MatrixXcd rebuilt = resynthesize_from_inner(factor, o.tol);
    double resynth = subspace_distance(rebuilt, basis);
    json payload{{"inner_factor", to_json(factor)}, {"resynthesis_distance", resynth}};
    emit(o, "inner", payload);
    std::cout << "support size = " << factor.sigma_support.size()
              << ", resynthesis distance = " << resynth << "\n";
    return 0;
}

int run_chi_e(const CommonOpts& o, const std::vector<std::string>& field_paths) {
    std::vector<CoefField> gens = load_fields(field_paths);
    const Universe& u = gens.front().universe;
    MatrixXcd basis = orbit_span_basis(gens, u, o.tol);
    ChiMask mask = chi_e_detect(basis, u, o.tol);
    emit(o, "chi_e", to_json(mask), [&](const fs::path& dir) { write_mask_csv(dir / "mask.csv", mask); });
    int count = 0;
    for (auto b : mask.mask) count += b;
    std::cout << "|E| = " << count << " of " << u.grid_count()
              << ", inclusion residual = " << mask.inclusion_residual << "\n";
    return 0;
}

int run_genlab(const CommonOpts& o, const std::string& base_path, const std::string& experiment,
               int samples, const std::vector<std::string>& candidate_paths) {
    Tuple base = load_tuple(base_path);
    Universe u = universe_for(base);

    if (experiment == "membership") {
        CommutantBasis cb = commutant_basis(base.T, base.L, o.tol);
        json runs = json::array();
        bool all_consistent = true;
        int in_count = 0;
        for (int s = 0; s < samples; ++s) {
            MatrixXcd b = sample_invertible_commutant(cb, o.seed + static_cast<std::uint64_t>(s));
            MembershipVerdict v = membership_V(base, b * base.generators[0], u, o.tol);
            all_consistent = all_consistent && v.consistent;
            in_count += v.in_v ? 1 : 0;
            runs.push_back(json{{"seed", o.seed + static_cast<std::uint64_t>(s)},
                                {"in_V", v.in_v},
                                {"similar", v.similar},
                                {"kernel_distance", v.kernel_distance},
                                {"consistent", v.consistent}});
        }
        for (const auto& path : candidate_paths) {
            Tuple cand = load_tuple(path);
            MembershipVerdict v = membership_V(base, cand.generators[0], u, o.tol);
            all_consistent = all_consistent && v.consistent;
            runs.push_back(json{{"candidate", path}, {"verdict", to_json(v)}});
        }
        json payload{{"commutant_dimension", cb.dimension},
                     {"runs", std::move(runs)},
                     {"all_consistent", all_consistent}};
        emit(o, "genlab_membership", payload);
        std::cout << "commutant dim = " << cb.dimension << ", " << in_count << "/" << samples
                  << " sampled pushes in V, consistent = " << std::boolalpha << all_consistent << "\n";
        if (!all_consistent)
            std::cerr << "tolerance failure: frame and kernel verdicts disagreed on some candidate\n";
        return 0;
    }

    if (experiment == "census") {
        std::vector<Tuple> tuples{base};
        for (const auto& path : candidate_paths) tuples.push_back(load_tuple(path));
        GeneratorClassReport rep = class_census(tuples, u, o.tol);
        rep.seed = o.seed;
        emit(o, "genlab_census", to_json(rep), [&](const fs::path& dir) {
            write_matrix_csv(dir / "kernel_distance.csv", rep.kernel_distance);
        });
        std::cout << "candidates = " << tuples.size() << ", classes >= " << rep.class_count << "\n";
        return 0;
    }

    if (experiment == "remark49") {
        MultigenCounterexample ce = counterexample_multigen(base, o.tol);
        fs::path dir = ensure_out(o);
        write_json_file(dir / "remark49_plus.json", to_json(ce.plus));
        write_json_file(dir / "remark49_minus.json", to_json(ce.minus));
        emit(o, "genlab_remark49", to_json(ce.report), [&](const fs::path& d) {
            write_matrix_csv(d / "kernel_distance.csv", ce.report.kernel_distance);
        });
        std::cout << "extensions written; classes = " << ce.report.class_count
                  << ", kernel distance = " << ce.report.kernel_distance(0, 1) << "\n";
        return 0;
    }

    throw std::runtime_error("unknown experiment '" + experiment + "'");
}

int run_preset(const CommonOpts& o, const std::string& name, int n_lambda, int m_z, int n_gen,
               const std::string& m_profile_csv, const std::string& mask_csv, int j_cutoff) {
    fs::path dir = ensure_out(o);
    auto dump_preset = [&](const Preset& p, const std::string& stem) {
        write_json_file(dir / (stem + ".json"), to_json(p.tuple));
        std::cout << "wrote " << (dir / (stem + ".json")).string() << " (dim_h = " << p.tuple.dim_h
                  << ")\n";
    };

    if (name == "full_riesz") {
        dump_preset(preset_full_riesz(n_lambda, m_z, n_gen), "full_riesz");
    } else if (name == "monomial_fibers") {
        std::vector<int> profile = m_profile_csv.empty()
                                       ? std::vector<int>(static_cast<size_t>(n_lambda), m_z)
                                       : parse_int_list(m_profile_csv);
        dump_preset(preset_monomial_fibers(n_lambda, m_z, n_gen, profile), "monomial_fibers");
    } else if (name == "bilateral_mask") {
        if (mask_csv.empty()) throw std::runtime_error("--mask is required for bilateral_mask");
        std::vector<int> raw = parse_int_list(mask_csv);
        std::vector<std::uint8_t> mask(raw.size());
        for (size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != 0 && raw[i] != 1) throw std::runtime_error("mask entries must be 0 or 1");
            mask[i] = static_cast<std::uint8_t>(raw[i]);
        }
        dump_preset(preset_bilateral_mask(n_lambda, m_z, mask), "bilateral_mask");
    } else if (name == "geometric_diag") {
        dump_preset(preset_geometric_diag(j_cutoff), "geometric_diag");
    } else if (name == "remark49_pair") {
        Remark49Pair pair = preset_remark49_pair(n_lambda, m_z, n_gen);
        write_json_file(dir / "remark49_base.json", to_json(pair.base.tuple));
        write_json_file(dir / "remark49_plus.json", to_json(pair.plus));
        write_json_file(dir / "remark49_minus.json", to_json(pair.minus));
        std::cout << "wrote remark49_base.json, remark49_plus.json, remark49_minus.json\n";
    } else {
        throw std::runtime_error("unknown preset '" + name + "'");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbitframes: frame analysis of orbit systems of two commuting operators"};
    app.require_subcommand(1);

    CommonOpts common;

    std::string tuple_path, a_path, b_path, experiment = "membership";
    std::vector<std::string> field_paths, candidate_paths;
    std::string preset_name, m_profile_csv, mask_csv;
    int n_lambda = 4, m_z = 3, n_gen = 1, j_cutoff = 50, samples = 50;

    CLI::App* analyze = app.add_subcommand("analyze", "frame bounds and tuple diagnostics");
    analyze->add_option("--tuple", tuple_path, "tuple JSON file")->required();
    add_common(analyze, common);

    CLI::App* model = app.add_subcommand("model", "construct and verify the basic tuple");
    model->add_option("--tuple", tuple_path, "tuple JSON file")->required();
    add_common(model, common);

    CLI::App* similar = app.add_subcommand("similar", "decide similarity of two tuples");
    similar->add_option("-a,--a", a_path, "first tuple JSON file")->required();
    similar->add_option("-b,--b", b_path, "second tuple JSON file")->required();
    add_common(similar, common);

    CLI::App* fibers = app.add_subcommand("fibers", "range function of generator fields");
    fibers->add_option("--fields", field_paths, "coefficient-field JSON files")->required();
    add_common(fibers, common);

    CLI::App* inner = app.add_subcommand("inner", "Beurling generators of a shift-invariant span");
    inner->add_option("--fields", field_paths, "coefficient-field JSON files spanning the subspace")
        ->required();
    add_common(inner, common);

    CLI::App* chi_e = app.add_subcommand("chi-e", "mask detection for bilateral reducing subspaces");
    chi_e->add_option("--fields", field_paths, "coefficient-field JSON files")->required();
    add_common(chi_e, common);

    CLI::App* genlab = app.add_subcommand("genlab", "single- and multi-generator experiments");
    genlab->add_option("--base", tuple_path, "base tuple JSON file")->required();
    genlab->add_option("--experiment", experiment, "membership, census or remark49")
        ->check(CLI::IsMember({"membership", "census", "remark49"}));
    genlab->add_option("--samples", samples, "number of sampled commutant maps");
    genlab->add_option("--candidates", candidate_paths, "additional tuple JSON files");
    add_common(genlab, common);

    CLI::App* preset = app.add_subcommand("preset", "emit ready-made tuple files");
    preset->add_option("--name", preset_name,
                       "full_riesz | monomial_fibers | bilateral_mask | geometric_diag | remark49_pair")
        ->required();
    preset->add_option("--N", n_lambda, "lambda-grid size (N1 for bilateral_mask)");
    preset->add_option("--M", m_z, "z-degree cutoff (N2 for bilateral_mask)");
    preset->add_option("--n", n_gen, "number of generators");
    preset->add_option("--m-profile", m_profile_csv, "comma-separated fiber dimensions, length N");
    preset->add_option("--mask", mask_csv, "comma-separated 0/1 mask of length N1*N2, t1-major");
    preset->add_option("--J", j_cutoff, "degree cutoff for geometric_diag");
    add_common(preset, common);

    try {
        app.parse(argc, argv);
        if (analyze->parsed()) return run_analyze(common, tuple_path);
        if (model->parsed()) return run_model(common, tuple_path);
        if (similar->parsed()) return run_similar(common, a_path, b_path);
        if (fibers->parsed()) return run_fibers(common, field_paths);
        if (inner->parsed()) return run_inner(common, field_paths);
        if (chi_e->parsed()) return run_chi_e(common, field_paths);
        if (genlab->parsed()) return run_genlab(common, tuple_path, experiment, samples, candidate_paths);
        if (preset->parsed())
            return run_preset(common, preset_name, n_lambda, m_z, n_gen, m_profile_csv, mask_csv,
                              j_cutoff);
        return 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
