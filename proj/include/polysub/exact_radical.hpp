// Recovery of the linear forms generating the vanishing ideal of a
// d-dimensional subspace from exact quadratic forms vanishing on it.
//
// Given at least Delta(D) - Delta(d) generic quadrics through the subspace,
// their coefficient rows span the full space of such quadrics. For each of
// D-d cyclic relabellings of the variables, triangularization under the
// descending lexicographic column order leaves a last nonzero row that
// factors as (last variable) x (linear form); dividing out the variable
// yields one generator. Independent linear constraints, when present, are
// removed beforehand by substitution.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "polysub/cumulants.hpp"
#include "polysub/polyspace.hpp"
#include "polysub/subspace.hpp"

namespace polysub {

// Thresholds of the elimination; defaults are pinned to the contract.
struct ExactOptions {
    double row_tol = 1e-10;  // nonzero-row cutoff, relative to the largest input row
    double div_tol = 1e-6;   // largest admissible division residual
};

// Per-permutation details of exact_generators, for inspection and tests.
struct ExactDiagnostics {
    std::vector<MonomialOrdering> orderings;
    std::vector<QuadraticForm> last_rows;  // canonical coefficients, pre-division
    std::vector<double> division_residuals;
    std::vector<int> ranks;
};

// Variable elimination performed on the linear block of a system.
struct EliminationRecord {
    std::vector<int> kept_vars;   // D-r indices, ascending
    std::vector<int> pivot_vars;  // r indices eliminated by substitution
    // D x (D-r) embedding: a reduced-space point y corresponds to the full
    // point E y. Full column rank.
    Eigen::MatrixXd point_embedding;
    // Independent linear forms spanning the eliminated constraints
    // (orthonormal coefficient rows in the full D variables).
    std::vector<LinearForm> eliminated_forms;

    int reduced_dim() const { return static_cast<int>(kept_vars.size()); }

    // Zero-pads a reduced-space form onto the kept coordinates; the result
    // vanishes on every full-space point satisfying the eliminated forms
    // whose reduced image is a zero of the input.
    LinearForm lift(const LinearForm& reduced) const;
};

// Removes the independent linear constraints of the system, rewriting every
// quadric in the D-r kept variables. r = 0 passes quadrics through under an
// identity record.
std::pair<std::vector<QuadraticForm>, EliminationRecord> eliminate_linears(
    const PolynomialSystem& system, double rank_tol = 1e-10);

// Core elimination: recovers the D-d generators from quadrics alone.
// Throws std::invalid_argument when fewer than Delta(D) - Delta(d) quadrics
// are supplied and NumericalError when the coefficient rank deviates from
// Delta(D) - Delta(d) or a division residual exceeds div_tol (both signal
// inexact or non-generic input; the SVD-based estimator handles those).
SubspaceEstimate exact_generators(std::span<const QuadraticForm> quadrics, int d,
                                  const ExactOptions& options = {},
                                  ExactDiagnostics* diagnostics = nullptr);

// Full exact pipeline on a system with linear forms: eliminate, solve the
// reduced problem, lift, and merge.
SubspaceEstimate exact_subspace(const PolynomialSystem& system, int d,
                                const ExactOptions& options = {});

// Operation count of the elimination, (Delta(D)-Delta(d))^2 * Delta(D).
std::int64_t complexity_estimate(int D, int d);

}  // namespace polysub
