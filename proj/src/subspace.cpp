#include "polysub/subspace.hpp"

#include <Eigen/SVD>

#include "polysub/errors.hpp"

namespace polysub {

void SubspaceEstimate::validate(double tol) const {
    if (basis.rows() != dim_ambient || basis.cols() != dim_subspace)
        throw NumericalError("SubspaceEstimate: basis shape mismatch");
    if (static_cast<int>(generators.size()) != dim_ambient - dim_subspace)
        throw NumericalError("SubspaceEstimate: generator count mismatch");

    const Eigen::MatrixXd gram = basis.transpose() * basis;
    if ((gram - Eigen::MatrixXd::Identity(dim_subspace, dim_subspace)).cwiseAbs().maxCoeff() >
        1e-10)
        throw NumericalError("SubspaceEstimate: basis columns not orthonormal");

    Eigen::MatrixXd rows(generators.size(), dim_ambient);
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const auto& l = generators[g];
        if (l.dim() != dim_ambient)
            throw NumericalError("SubspaceEstimate: generator dimension mismatch");
        for (int c = 0; c < dim_subspace; ++c)
            if (std::abs(l.evaluate(basis.col(c))) > tol * std::max(l.norm(), 1e-300))
                throw NumericalError("SubspaceEstimate: generator does not vanish on basis");
        rows.row(static_cast<Eigen::Index>(g)) = l.coeffs().transpose() / l.norm();
    }
    if (!generators.empty()) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
        if (svd.singularValues().minCoeff() <= 1e-10)
            throw NumericalError("SubspaceEstimate: generators not linearly independent");
    }
}

}  // namespace polysub
