// Least-squares estimation of the generators of a subspace's vanishing
// ideal from noisy quadratic forms, via singular value decompositions at
// prescribed ranks.
//
// For each variable T_i the rows of the coefficient matrix are projected
// onto the directions least visible on the monomials not divisible by T_i;
// the surviving span estimates the quadrics of the form T_i * (linear form),
// whose T_i-divisible coefficients are linear-form estimates. The D
// per-variable estimates are pooled by one final row-span extraction.

#pragma once

#include <Eigen/Dense>
#include <span>

#include "polysub/cumulants.hpp"
#include "polysub/polyspace.hpp"
#include "polysub/subspace.hpp"

namespace polysub {

// Ranks used by the two SVD stages; fully determined by the problem shape,
// never estimated from the data.
struct RankSpec {
    int left_null_rank = 0;  // (m-1) - Delta(D) + Delta(d) + D - d
    int row_span_rank = 0;   // D - d

    static RankSpec compute(int num_quadrics, int D, int d);
};

// Rows spanning the rank-k approximate left null space of A: the left
// singular vectors of the k smallest singular values (counting the exact
// zeros of a row-deficient A). Requires 1 <= k <= rows(A).
Eigen::MatrixXd rank_k_left_null(const Eigen::MatrixXd& a, int k);

// Rows spanning the rank-k approximate row span of A: the right singular
// vectors of the k largest singular values. Requires 1 <= k <= min(rows, cols).
Eigen::MatrixXd rank_k_row_span(const Eigen::MatrixXd& a, int k);

// Estimates the D-d generators from quadrics alone. Requires
// count >= Delta(D) - Delta(d) and 0 < d < D. Deterministic up to the fixed
// sign convention (each row's largest entry positive).
SubspaceEstimate approx_generators(std::span<const QuadraticForm> quadrics, int d);

// Full noisy pipeline: estimates the span of the linear forms at prescribed
// tolerance, projects the quadrics onto its orthogonal complement, runs
// approx_generators there, and merges the two generator sets.
SubspaceEstimate estimate_subspace(const PolynomialSystem& system, int d);

}  // namespace polysub
