// Per-epoch first and second cumulants, the centering/whitening
// normalization, and construction of the polynomial system whose common
// zeros are the directions with epoch-independent projected statistics.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "polysub/polyspace.hpp"

namespace polysub {

struct EpochCumulants {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

// Enforces the type invariants: cov square and matching mean, symmetric to
// 1e-10 relative, eigenvalues >= -1e-10 * ||cov||. Throws on violation.
void validate_epoch(const EpochCumulants& epoch);

// Sample mean and unbiased covariance (divisor N-1) from an N x D matrix of
// row samples. Requires N >= 2 and finite entries.
EpochCumulants estimate_epoch(const Eigen::MatrixXd& samples);

enum class WhitenReference { Average, Last };

struct WhitenResult {
    std::vector<EpochCumulants> epochs;
    Eigen::MatrixXd transform;  // W = Sigma_ref^{-1/2}, symmetric
    Eigen::VectorXd shift;      // reference mean; x maps to W (x - shift)
};

// Shifts and rescales all epochs so the reference epoch becomes standard:
// zero mean, identity covariance. The reference covariance must be positive
// definite (smallest eigenvalue > 1e-12 * largest), otherwise a
// NumericalError reports the condition failure.
WhitenResult center_whiten(const std::vector<EpochCumulants>& epochs,
                           WhitenReference reference);

struct PolynomialSystem {
    int dim = 0;
    std::vector<QuadraticForm> quadrics;
    std::vector<LinearForm> linears;
};

enum class SystemMode {
    // One quadric Sigma_i - I and one linear form mu_i per epoch
    // i = 1..m-1; the last epoch is the reference (assumed standardized by
    // center_whiten) and contributes no forms.
    Reference,
    // One quadric Sigma_i - Sigma_j and one linear form mu_i - mu_j per
    // unordered pair i < j. Does not assume whitened input.
    Pairwise,
};

// Builds the polynomial system from m >= 2 epochs. Linear forms with norm
// below 1e-12 are dropped; zero quadrics are kept as rows.
PolynomialSystem build_system(const std::vector<EpochCumulants>& epochs, SystemMode mode);

}  // namespace polysub
