#pragma once

#include "orbitframes/fibers.hpp"
#include "orbitframes/genlab.hpp"
#include "orbitframes/model.hpp"
#include "orbitframes/tuples.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <string>

namespace orbitframes {

using json = nlohmann::json;

// complex values are [re, im] pairs throughout; matrices are row-major
// nested arrays. Round-trips are exact (shortest-round-trip doubles).
json complex_to_json(const cxd& z);
cxd complex_from_json(const json& j);
json vector_to_json(const VectorXcd& v);
VectorXcd vector_from_json(const json& j);
json matrix_to_json(const MatrixXcd& m);
MatrixXcd matrix_from_json(const json& j);

json to_json(const Universe& u);
Universe universe_from_json(const json& j);

json to_json(const CoefField& f);
CoefField coef_field_from_json(const json& j);

json to_json(const IterationPolicy& p);
IterationPolicy iteration_from_json(const json& j);

json to_json(const Tuple& t);
Tuple tuple_from_json(const json& j);

json to_json(const Tolerances& tol);
Tolerances tolerances_from_json(const json& j);

json to_json(const TupleDiagnostics& d);
json to_json(const FrameReport& r);
json to_json(const BasicTuple& b);
json to_json(const IntertwiningReport& r);
json to_json(const SimilarityVerdict& v);
json to_json(const RangeFunction& rf);
json to_json(const InnerFactor& f);
json to_json(const ChiMask& m);
json to_json(const MembershipVerdict& v);
json to_json(const GeneratorClassReport& r);

/// Report envelope: payload plus a meta block (tool, version, seed,
/// tolerances, timestamp). Everything outside meta.generated_at is
/// deterministic for a fixed configuration and seed.
json make_report(const std::string& kind, json payload, const Tolerances& tol,
                 std::uint64_t seed = 0, bool with_timestamp = true);

void write_json_file(const std::filesystem::path& path, const json& j);
json read_json_file(const std::filesystem::path& path);

void write_spectrum_csv(const std::filesystem::path& path, const VectorXd& spectrum);
void write_dims_csv(const std::filesystem::path& path, const RangeFunction& rf);
void write_mask_csv(const std::filesystem::path& path, const ChiMask& m);
void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m);

} // namespace orbitframes
