#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace orbitframes {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr const char* kToolName = "orbitframes";
inline constexpr const char* kToolVersion = "0.1.0";

/// Thrown when a mathematical precondition or invariant fails (non-frame
/// input, singular operator, ambiguous rank decision, ...). The message
/// starts with the name of the violated invariant. Distinct from I/O or
/// configuration errors, which use std::runtime_error.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& invariant, const std::string& detail)
        : std::runtime_error(invariant + ": " + detail), invariant_(invariant) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

/// Numerical tolerances shared across the toolkit. Defaults sit an order of
/// magnitude above double-precision accumulation at desk sizes (dim <= ~4096).
struct Tolerances {
    double comm_tol = 1e-10;        // relative commutator bound for TL = LT
    double inv_tol_rel = 1e-12;     // sigma_min(T) > inv_tol_rel * ||T||
    double parseval_tol = 1e-8;     // |A-1|, |B-1| for Parseval verdicts
    double frame_tol_rel = 1e-9;    // A > frame_tol_rel * B for frame verdicts
    double rank_rel_tol = 1e-10;    // SVD rank cutoff, relative to sigma_max
    double rank_gap_min = 10.0;     // smallest kept / largest dropped must exceed this
    double sim_tol = 1e-7;          // kernel projector distance for similarity
    double red_tol = 1e-8;          // reducing / invariance defect bound
    double intertwine_rel = 1e-8;   // intertwining residuals, relative to ||C||
    double fiber_rel_tol = 1e-10;   // per-fiber SVD cutoff
};

} // namespace orbitframes
