// Evaluation machinery: principal angles between subspaces, the
// identifiability bound on the number of epochs, the whiten/build/solve
// pipeline shared by the command-line tool, and the seeded trial runner
// with CSV / JSON emission.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "polysub/cumulants.hpp"
#include "polysub/exact_radical.hpp"
#include "polysub/ssa.hpp"
#include "polysub/subspace.hpp"
#include "polysub/synth.hpp"

namespace polysub {

// Largest principal angle (radians) between the column spans of two
// orthonormal matrices; for unequal dimensions, the largest over the
// min(p, q) principal pairs. Computed from both the cosines (singular
// values of A^T B) and the sines (singular values of (I - A A^T) B) via
// atan2, which stays accurate for very small and very large angles.
double principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct IdentifiabilityReport {
    int D = 0;
    int d = 0;
    int requested_m = 0;
    int min_m_identifiable = 0;               // ceil((D-d+1)/2) + 1
    std::int64_t min_quadrics_exact_alg = 0;  // Delta(D) - Delta(d)
    bool identifiable = false;                // m >= min_m_identifiable
    bool exact_alg_regime = false;            // m-1 >= min_quadrics_exact_alg
};

IdentifiabilityReport identifiability(int D, int d, int m);

enum class Method { Exact, Approx, Ssa };

struct PipelineOptions {
    Method method = Method::Approx;
    SystemMode mode = SystemMode::Reference;
    WhitenReference reference = WhitenReference::Last;
    // Means enter the system only on request: sample means of epochs whose
    // true means agree are pure estimation noise, and the benchmark model
    // varies covariances only.
    bool use_means = false;
    SSAConfig ssa;
    std::uint64_t ssa_seed = 0;
    ExactOptions exact;
};

struct PipelineResult {
    SubspaceEstimate estimate;  // in the original coordinates
    double runtime_s = 0.0;     // whiten + build + solve, wall clock
    bool converged = true;
    int iterations = 0;  // SSA only
};

// Whitens, builds the polynomial system, runs the selected estimator, and
// maps the result back to the original coordinates.
PipelineResult estimate_pipeline(const std::vector<EpochCumulants>& epochs, int d,
                                 const PipelineOptions& options);

struct TrialResult {
    std::string method;  // "algebraic" or "ssa"
    int D = 0;
    int d = 0;
    int m = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double angle_rad = 0.0;
    double runtime_s = 0.0;
    bool converged = false;
};

struct Quantiles {
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
};

// Linear-interpolation quantile of the p in [0,1] over sorted copies.
double quantile(std::vector<double> values, double p);

struct MethodCellStats {
    int trials = 0;
    int converged = 0;
    Quantiles angle;    // over converged trials
    Quantiles runtime;  // over converged trials
};

struct CellSummary {
    int D = 0;
    int d = 0;
    int m = 0;
    double sigma = 0.0;
    std::map<std::string, MethodCellStats> methods;
};

struct GridConfig {
    int D = 10;
    int m = 110;
    std::vector<int> d_values;
    std::vector<double> sigmas;
    int trials = 1;
    std::vector<Method> methods = {Method::Approx, Method::Ssa};
    std::uint64_t seed = 0;
    int jobs = 1;
    bool disturb = true;
    SSAConfig ssa;
};

struct GridResult {
    std::vector<TrialResult> results;
    std::vector<CellSummary> cells;
    std::vector<std::string> warnings;
};

// Runs every (d, sigma) cell of the grid; cells below the identifiability
// bound are skipped with a warning record. Per-trial seeds derive from the
// master seed via the declared mixing function, so results do not depend on
// the number of jobs. Estimator failures are recorded as converged=false
// and excluded from the quantiles.
GridResult run_grid(const GridConfig& config);

// One row per TrialResult; header
// method,D,d,m,sigma,seed,angle_rad,runtime_s,converged.
std::string results_csv(std::span<const TrialResult> results);

nlohmann::json summary_json(const GridResult& result, const GridConfig& config);

}  // namespace polysub
