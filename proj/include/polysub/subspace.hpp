#pragma once

#include <Eigen/Dense>
#include <vector>

#include "polysub/polyspace.hpp"

namespace polysub {

// A recovered d-dimensional subspace of R^D, described both by an
// orthonormal basis and by the D-d linear forms vanishing on it.
struct SubspaceEstimate {
    int dim_ambient = 0;
    int dim_subspace = 0;
    Eigen::MatrixXd basis;              // D x d, orthonormal columns
    std::vector<LinearForm> generators; // D-d independent forms, zero on the span

    // Checks the structural invariants: orthonormal basis, generators
    // vanishing on it (relative to tol), and linearly independent generator
    // rows. Throws NumericalError on violation.
    void validate(double tol = 1e-8) const;
};

}  // namespace polysub
