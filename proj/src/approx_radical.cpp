#include "polysub/approx_radical.hpp"

#include <Eigen/SVD>
#include <sstream>
#include <vector>

#include "polysub/errors.hpp"
#include "polysub/linalg.hpp"

namespace polysub {

RankSpec RankSpec::compute(int num_quadrics, int D, int d) {
    if (!(0 < d && d < D)) throw std::invalid_argument("RankSpec: need 0 < d < D");
    const int rho = static_cast<int>(triangular(D) - triangular(d));
    if (num_quadrics < rho) {
        std::ostringstream msg;
        msg << "RankSpec: need at least " << rho << " quadrics for D=" << D << ", d=" << d
            << ", got " << num_quadrics;
        throw std::invalid_argument(msg.str());
    }
    return {num_quadrics - rho + (D - d), D - d};
}

Eigen::MatrixXd rank_k_left_null(const Eigen::MatrixXd& a, int k) {
    if (k < 1 || k > a.rows())
        throw std::invalid_argument("rank_k_left_null: need 1 <= k <= rows");
    if (!a.allFinite()) throw NumericalError("rank_k_left_null: non-finite input");
    // Full U so exact null directions of a row-deficient matrix count among
    // the smallest singular values.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU);
    Eigen::MatrixXd l = svd.matrixU().rightCols(k).transpose();
    fix_row_signs(l);
    return l;
}

Eigen::MatrixXd rank_k_row_span(const Eigen::MatrixXd& a, int k) {
    if (k < 1 || k > std::min(a.rows(), a.cols()))
        throw std::invalid_argument("rank_k_row_span: need 1 <= k <= min(rows, cols)");
    if (!a.allFinite()) throw NumericalError("rank_k_row_span: non-finite input");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
    Eigen::MatrixXd s = svd.matrixV().leftCols(k).transpose();
    fix_row_signs(s);
    return s;
}

SubspaceEstimate approx_generators(std::span<const QuadraticForm> quadrics, int d) {
    if (quadrics.empty()) throw std::invalid_argument("approx_generators: no quadrics");
    const int D = quadrics.front().dim();
    for (const auto& q : quadrics)
        if (q.dim() != D) throw std::invalid_argument("approx_generators: mixed dimensions");
    const auto ranks = RankSpec::compute(static_cast<int>(quadrics.size()), D, d);

    const auto cm =
        quadratic_coefficient_matrix(quadrics, MonomialOrdering::identity(D));
    const Eigen::MatrixXd& q = cm.entries;
    const auto monomials = canonical_monomials(D);

    Eigen::MatrixXd pooled(static_cast<Eigen::Index>(D) * (D - d), D);
    for (int var = 0; var < D; ++var) {
        std::vector<Eigen::Index> coprime_cols;
        for (std::size_t c = 0; c < monomials.size(); ++c)
            if (monomials[c].i != var && monomials[c].j != var)
                coprime_cols.push_back(static_cast<Eigen::Index>(c));

        Eigen::MatrixXd q_var(q.rows(), static_cast<Eigen::Index>(coprime_cols.size()));
        for (std::size_t c = 0; c < coprime_cols.size(); ++c)
            q_var.col(static_cast<Eigen::Index>(c)) = q.col(coprime_cols[c]);

        // Combinations of the input rows that are almost zero outside the
        // T_var-divisible monomials...
        const Eigen::MatrixXd left = rank_k_left_null(q_var, ranks.left_null_rank);
        // ...restricted to their dominant span: estimates of T_var * (form).
        const Eigen::MatrixXd span = rank_k_row_span(left * q, ranks.row_span_rank);

        // T_var-divisible coefficients, in the variable-division layout.
        for (int row = 0; row < D - d; ++row) {
            for (int j = 0; j < D; ++j) {
                const int c = monomial_index(std::min(var, j), std::max(var, j), D);
                pooled(static_cast<Eigen::Index>(var) * (D - d) + row, j) = span(row, c);
            }
        }
    }

    const Eigen::MatrixXd gens = rank_k_row_span(pooled, D - d);

    SubspaceEstimate est;
    est.dim_ambient = D;
    est.dim_subspace = d;
    est.basis = null_space_basis(gens, d);
    for (int g = 0; g < D - d; ++g) est.generators.emplace_back(gens.row(g).transpose());
    return est;
}

SubspaceEstimate estimate_subspace(const PolynomialSystem& system, int d) {
    const int D = system.dim;
    if (!(0 < d && d < D)) throw std::invalid_argument("estimate_subspace: need 0 < d < D");
    if (system.linears.empty()) return approx_generators(system.quadrics, d);

    const Eigen::MatrixXd f = linear_coefficient_matrix(system.linears);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(f, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int count = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-6 * sv[0]) ++count;
    int r = count;
    if (count > D - d) {
        // More directions above threshold than a d-dimensional solution
        // allows. If the excess direction is on the scale of the leading
        // one the constraints genuinely over-determine the space; a sharp
        // drop marks a noise tail, which sets the floor for how many
        // leading directions to keep.
        if (sv[D - d] > 0.1 * sv[0])
            throw NumericalError(
                "estimate_subspace: linear forms span more than D-d significant "
                "directions; they over-determine a smaller-than-d subspace");
        const double floor = sv[D - d];
        r = 0;
        for (int i = 0; i < D - d; ++i)
            if (sv[i] > 10.0 * floor) ++r;
    }
    if (r == 0) return approx_generators(system.quadrics, d);

    Eigen::MatrixXd linear_gens = svd.matrixV().leftCols(r).transpose();
    fix_row_signs(linear_gens);
    const Eigen::MatrixXd complement = svd.matrixV().rightCols(D - r);  // D x (D-r)

    Eigen::MatrixXd stacked(D - d, D);
    stacked.topRows(r) = linear_gens;
    if (r < D - d) {
        // Approximate analogue of the exact variable elimination: quadrics
        // restricted to the complement coordinates.
        std::vector<QuadraticForm> reduced;
        reduced.reserve(system.quadrics.size());
        for (const auto& q : system.quadrics)
            reduced.push_back(QuadraticForm::from_gram(complement.transpose() *
                                                       q.to_gram() * complement));
        const auto sub = approx_generators(reduced, d);
        for (int g = 0; g < (D - r) - d; ++g)
            stacked.row(r + g) =
                (complement * sub.generators[static_cast<std::size_t>(g)].coeffs())
                    .transpose();
    }

    SubspaceEstimate est;
    est.dim_ambient = D;
    est.dim_subspace = d;
    est.basis = null_space_basis(stacked, d);
    for (int g = 0; g < D - d; ++g) est.generators.emplace_back(stacked.row(g).transpose());
    return est;
}

}  // namespace polysub
