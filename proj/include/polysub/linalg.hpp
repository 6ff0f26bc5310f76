// Small shared dense-linear-algebra helpers on top of Eigen.

#pragma once

#include <Eigen/Dense>

namespace polysub {

// Flips each column so that its largest-magnitude entry is positive.
// Pins the sign ambiguity of singular/eigen vectors for reproducible output.
void fix_column_signs(Eigen::MatrixXd& m);

// Row-wise variant of fix_column_signs.
void fix_row_signs(Eigen::MatrixXd& m);

// Orthonormal basis (D x k) of the column span of `m` (D x k, full column
// rank expected). Deterministic signs.
Eigen::MatrixXd orthonormalize_columns(const Eigen::MatrixXd& m);

// Orthonormal basis (cols x nullity) of the null space of `rows_mat`,
// computed from the right singular vectors of the smallest singular values.
Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& rows_mat, int nullity);

// Orthonormal basis (D x (D-k)) of the orthogonal complement of the span of
// the columns of `basis` (D x k, orthonormal columns expected).
Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& basis);

}  // namespace polysub
