// Gradient-based baseline: finds the projection whose epoch-wise projected
// cumulants are closest to the standard normal, measured by summed Gaussian
// divergences. The frame is parameterized through exponentials of
// antisymmetric matrices, so orthonormality holds by construction.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "polysub/cumulants.hpp"

namespace polysub {

enum class SSAVariant {
    // Sum of -log det(P Sigma_i P^T) + |P mu_i|^2.
    LogDet,
    // Complete Gaussian divergence to N(0, I): adds the trace term, which
    // bounds the objective below. Default.
    FullKL,
};

struct SSAConfig {
    int restarts = 5;
    int max_iters = 300;
    double grad_tol = 1e-6;
    double step_init = 1.0;
    SSAVariant variant = SSAVariant::FullKL;
};

// Objective at a frame P (d x D, orthonormal rows to 1e-8) over whitened
// epochs. Throws on non-orthonormal P or a singular projected covariance.
double ssa_objective(const Eigen::MatrixXd& p, std::span<const EpochCumulants> epochs,
                     SSAVariant variant);

// dJ/dP of ssa_objective; validated against central differences in tests.
Eigen::MatrixXd ssa_objective_gradient(const Eigen::MatrixXd& p,
                                       std::span<const EpochCumulants> epochs,
                                       SSAVariant variant);

struct SSAResult {
    Eigen::MatrixXd p;  // d x D, orthonormal rows
    double objective = 0.0;
    int iterations = 0;
    // False only when backtracking failed to find a decreasing step after
    // 50 halvings; the current iterate is still returned.
    bool converged = true;
    // Accepted objective values of the winning restart, descent-monotone.
    std::vector<double> trace;
};

// Minimizes the objective over orthonormal d x D frames by gradient descent
// with backtracking line search in the antisymmetric-exponential chart,
// restarted from `restarts` random frames; returns the best.
SSAResult ssa_optimize(std::span<const EpochCumulants> epochs, int d,
                       const SSAConfig& config, std::uint64_t seed);

}  // namespace polysub
