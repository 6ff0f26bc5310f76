// Synthetic benchmark instances: families of covariance matrices whose
// projections agree on a planted d-dimensional subspace, optionally
// perturbed by log-calibrated positive disturbance matrices and mixed into
// a random basis.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "polysub/rng.hpp"

namespace polysub {

struct ProblemInstance {
    int D = 0;
    int d = 0;
    int m = 0;
    double sigma = 0.0;  // mean log-eigenvalue of the disturbances
    bool disturbed = false;
    std::uint64_t seed = 0;
    std::vector<Eigen::MatrixXd> covariances;
    std::vector<Eigen::VectorXd> means;
    // Orthonormal D x d basis of the subspace on which all epochs agree.
    Eigen::MatrixXd true_basis;
};

// exp(A) for A = (B - B^T)/2 with B entries uniform on (-1,1).
// Always a rotation (determinant +1), orthogonal to machine precision.
Eigen::MatrixXd random_orthogonal(int dim, Rng& rng);

// Symmetric positive definite matrix whose eigenvalue logs average to
// `sigma` exactly and deviate from it by less than 1.
Eigen::MatrixXd disturbance(int dim, double sigma, Rng& rng);

// Per-epoch Cholesky factors sharing their first d rows; C_i = L_i L_i^T
// then all have an identical top-left d x d block. Diagonal entries are
// |u| + 0.5 for u uniform on (-1,1) so every factor is nonsingular.
std::vector<Eigen::MatrixXd> shared_block_factors(int D, int d, int m, Rng& rng);

struct GenerateOptions {
    bool disturb = true;
    // When set, epoch means are drawn in the orthogonal complement of the
    // common subspace (so the induced linear forms vanish on it) plus an
    // isotropic perturbation of magnitude exp(sigma).
    bool mean_noise = false;
};

ProblemInstance generate(int D, int d, int m, double sigma, std::uint64_t seed,
                         const GenerateOptions& options = {});

}  // namespace polysub
