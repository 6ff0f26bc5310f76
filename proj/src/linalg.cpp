#include "polysub/linalg.hpp"

#include <Eigen/SVD>

namespace polysub {

void fix_column_signs(Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        Eigen::Index imax = 0;
        m.col(c).cwiseAbs().maxCoeff(&imax);
        if (m(imax, c) < 0.0) m.col(c) = -m.col(c);
    }
}

void fix_row_signs(Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Eigen::Index imax = 0;
        m.row(r).cwiseAbs().maxCoeff(&imax);
        if (m(r, imax) < 0.0) m.row(r) = -m.row(r);
    }
}

Eigen::MatrixXd orthonormalize_columns(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
    Eigen::MatrixXd q = svd.matrixU();
    fix_column_signs(q);
    return q;
}

Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& rows_mat, int nullity) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows_mat, Eigen::ComputeFullV);
    const Eigen::MatrixXd& v = svd.matrixV();
    Eigen::MatrixXd basis = v.rightCols(nullity);
    fix_column_signs(basis);
    return basis;
}

Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& basis) {
    return null_space_basis(basis.transpose(),
                            static_cast<int>(basis.rows() - basis.cols()));
}

}  // namespace polysub
