#include "polysub/exact_radical.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <sstream>

#include "polysub/errors.hpp"
#include "polysub/linalg.hpp"

namespace polysub {

namespace {

// The elimination kernel runs in extended precision: the echelon's last
// pivot can be small on legitimately generic instances, and its reciprocal
// multiplies the roundoff of the triangularization.
using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

struct Echelon {
    LongMatrix m;
    int rank = 0;
};

// Triangularization into row echelon form by Householder reflections.
// Columns are processed left to right and never exchanged, so the echelon
// shape follows the monomial order of the input; orthogonal row
// combinations keep the row space intact without the roundoff growth of
// elementary row operations. Elimination stops once every remaining row is
// negligible against the largest row of the input (row_tol rule); columns
// whose remaining entries are negligible against the remaining rows are
// structural zeros and are skipped.
Echelon row_echelon(LongMatrix m, double row_tol) {
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    long double max_row_norm = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i)
        max_row_norm = std::max(max_row_norm, m.row(i).norm());
    if (max_row_norm == 0.0) return {std::move(m), 0};

    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        long double remaining = 0.0;
        for (Eigen::Index i = r; i < rows; ++i)
            remaining = std::max(remaining, m.row(i).norm());
        if (remaining <= row_tol * max_row_norm) break;

        const Eigen::Index tail = rows - r;
        const long double col_norm = m.col(c).segment(r, tail).norm();
        // Structurally zero columns stay exactly zero under the orthogonal
        // row combinations, so a tight cutoff suffices; honest pivots may
        // legitimately be very small on near-degenerate spans.
        if (col_norm <= 1e-14L * remaining) continue;

        LongVector v = m.col(c).segment(r, tail);
        const long double alpha = v[0] < 0.0L ? col_norm : -col_norm;
        v[0] -= alpha;
        const long double vsq = v.squaredNorm();
        if (vsq > 0.0L) {
            auto block = m.block(r, c, tail, cols - c);
            const Eigen::Matrix<long double, 1, Eigen::Dynamic> w =
                (v.transpose() * block) * (2.0L / vsq);
            block.noalias() -= v * w;
        }
        m(r, c) = alpha;
        m.col(c).segment(r + 1, tail - 1).setZero();
        ++r;
    }
    return {std::move(m), static_cast<int>(r)};
}

Eigen::VectorXd normalized_generator(Eigen::VectorXd l) {
    l /= l.norm();
    for (Eigen::Index i = 0; i < l.size(); ++i) {
        if (std::abs(l[i]) > 1e-10) {
            if (l[i] < 0.0) l = -l;
            break;
        }
    }
    return l;
}

}  // namespace

std::int64_t complexity_estimate(int D, int d) {
    if (!(0 < d && d < D)) throw std::invalid_argument("complexity_estimate: need 0 < d < D");
    const std::int64_t gap = triangular(D) - triangular(d);
    return gap * gap * triangular(D);
}

LinearForm EliminationRecord::lift(const LinearForm& reduced) const {
    if (reduced.dim() != reduced_dim())
        throw std::invalid_argument("EliminationRecord::lift: dimension mismatch");
    Eigen::VectorXd full = Eigen::VectorXd::Zero(point_embedding.rows());
    for (std::size_t p = 0; p < kept_vars.size(); ++p)
        full[kept_vars[p]] = reduced.coeffs()[static_cast<Eigen::Index>(p)];
    return LinearForm(std::move(full));
}

std::pair<std::vector<QuadraticForm>, EliminationRecord> eliminate_linears(
    const PolynomialSystem& system, double rank_tol) {
    const int D = system.dim;
    EliminationRecord record;

    if (system.linears.empty()) {
        record.kept_vars.resize(static_cast<std::size_t>(D));
        for (int v = 0; v < D; ++v) record.kept_vars[static_cast<std::size_t>(v)] = v;
        record.point_embedding = Eigen::MatrixXd::Identity(D, D);
        return {system.quadrics, std::move(record)};
    }

    const Eigen::MatrixXd f = linear_coefficient_matrix(system.linears);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(f, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rank_tol * sv[0]) ++r;

    if (r == 0) {  // all forms numerically zero
        PolynomialSystem bare{system.dim, system.quadrics, {}};
        return eliminate_linears(bare, rank_tol);
    }

    Eigen::MatrixXd span_rows = svd.matrixV().leftCols(r).transpose();
    fix_row_signs(span_rows);
    for (int i = 0; i < r; ++i)
        record.eliminated_forms.emplace_back(span_rows.row(i).transpose());

    // Column-pivoted elimination picks which variables to substitute away.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(f);
    const auto perm = qr.colsPermutation().indices();
    std::vector<int> pivots(perm.data(), perm.data() + r);
    std::vector<int> kept(perm.data() + r, perm.data() + f.cols());

    const Eigen::MatrixXd rmat = qr.matrixR()
                                     .topLeftCorner(std::min<Eigen::Index>(f.rows(), D), D)
                                     .triangularView<Eigen::Upper>();
    // R11 x_pivot + R12 x_kept = 0 on the constraint set.
    const Eigen::MatrixXd r11 = rmat.topLeftCorner(r, r);
    const Eigen::MatrixXd r12 = rmat.topRightCorner(r, D - r);
    const Eigen::MatrixXd substitution =
        -r11.triangularView<Eigen::Upper>().solve(r12);  // r x (D-r), kept in perm order

    std::vector<int> kept_sorted = kept;
    std::sort(kept_sorted.begin(), kept_sorted.end());
    record.kept_vars = kept_sorted;
    record.pivot_vars = pivots;

    Eigen::MatrixXd embed = Eigen::MatrixXd::Zero(D, D - r);
    for (int p = 0; p < D - r; ++p) {
        const int var = kept_sorted[static_cast<std::size_t>(p)];
        embed(var, p) = 1.0;
        const auto pos = std::find(kept.begin(), kept.end(), var) - kept.begin();
        for (int t = 0; t < r; ++t)
            embed(pivots[static_cast<std::size_t>(t)], p) = substitution(t, pos);
    }
    record.point_embedding = embed;

    std::vector<QuadraticForm> reduced;
    reduced.reserve(system.quadrics.size());
    for (const auto& q : system.quadrics)
        reduced.push_back(
            QuadraticForm::from_gram(embed.transpose() * q.to_gram() * embed));
    return {std::move(reduced), std::move(record)};
}

SubspaceEstimate exact_generators(std::span<const QuadraticForm> quadrics, int d,
                                  const ExactOptions& options,
                                  ExactDiagnostics* diagnostics) {
    if (quadrics.empty()) throw std::invalid_argument("exact_generators: no quadrics");
    const int D = quadrics.front().dim();
    for (const auto& q : quadrics)
        if (q.dim() != D) throw std::invalid_argument("exact_generators: mixed dimensions");
    if (!(0 < d && d < D)) throw std::invalid_argument("exact_generators: need 0 < d < D");

    const int rho = static_cast<int>(triangular(D) - triangular(d));
    if (static_cast<int>(quadrics.size()) < rho) {
        std::ostringstream msg;
        msg << "exact_generators: need at least " << rho << " quadrics for D=" << D
            << ", d=" << d << ", got " << quadrics.size();
        throw std::invalid_argument(msg.str());
    }

    Eigen::MatrixXd gens(D - d, D);
    for (int k = 1; k <= D - d; ++k) {
        const auto ordering = MonomialOrdering::cyclic_power(D, k);
        auto cm = quadratic_coefficient_matrix(quadrics, ordering);
        if (cm.entries.cwiseAbs().maxCoeff() == 0.0)
            throw NumericalError("exact_generators: all quadrics are zero");

        // Row equilibration: a left diagonal factor leaves the row space
        // untouched but evens out covariance-scale imbalances across epochs.
        LongMatrix work = cm.entries.cast<long double>();
        for (Eigen::Index i = 0; i < work.rows(); ++i) {
            const long double norm = work.row(i).norm();
            if (norm > 0.0L) work.row(i) /= norm;
        }

        const Echelon ech = row_echelon(std::move(work), options.row_tol);
        if (ech.rank != rho) {
            std::ostringstream msg;
            msg << "exact_generators: coefficient matrix has rank " << ech.rank
                << " but " << rho
                << " is required; input is inexact or non-generic — use the "
                   "approximate estimator";
            throw NumericalError(msg.str());
        }

        const auto order = column_order(ordering);
        LongVector canonical = LongVector::Zero(triangular(D));
        for (std::size_t c = 0; c < order.size(); ++c)
            canonical[monomial_index(order[c].i, order[c].j, D)] =
                ech.m(rho - 1, static_cast<Eigen::Index>(c));

        // Divide the last row by its variable: quotient and residual in
        // extended precision, following the coefficient rule of
        // divide_by_var.
        const int divisor = ordering.perm[static_cast<std::size_t>(D - 1)];
        LongVector quotient(D);
        for (int j = 0; j < D; ++j)
            quotient[j] =
                canonical[monomial_index(std::min(divisor, j), std::max(divisor, j), D)];
        long double rem_sq = 0.0L;
        for (const auto& mono : canonical_monomials(D)) {
            if (mono.i == divisor || mono.j == divisor) continue;
            const long double c = canonical[monomial_index(mono.i, mono.j, D)];
            rem_sq += c * c;
        }
        const double residual =
            static_cast<double>(std::sqrt(rem_sq) / canonical.norm());

        if (diagnostics) {
            diagnostics->orderings.push_back(ordering);
            diagnostics->last_rows.emplace_back(D, canonical.cast<double>().eval());
            diagnostics->division_residuals.push_back(residual);
            diagnostics->ranks.push_back(ech.rank);
        }
        if (residual > options.div_tol) {
            std::ostringstream msg;
            msg << "exact_generators: division residual " << residual << " exceeds "
                << options.div_tol
                << "; input is inexact or non-generic — use the approximate estimator";
            throw NumericalError(msg.str());
        }
        quotient /= quotient.norm();
        gens.row(k - 1) = normalized_generator(quotient.cast<double>()).transpose();
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gens);
    if (svd.singularValues().minCoeff() <= 1e-10)
        throw NumericalError("exact_generators: recovered generators are dependent");

    SubspaceEstimate est;
    est.dim_ambient = D;
    est.dim_subspace = d;
    est.basis = null_space_basis(gens, d);
    for (int g = 0; g < D - d; ++g) est.generators.emplace_back(gens.row(g).transpose());
    return est;
}

SubspaceEstimate exact_subspace(const PolynomialSystem& system, int d,
                                const ExactOptions& options) {
    const int D = system.dim;
    if (!(0 < d && d < D)) throw std::invalid_argument("exact_subspace: need 0 < d < D");

    auto [reduced, record] = eliminate_linears(system);
    const int r = static_cast<int>(record.pivot_vars.size());
    if (r > D - d)
        throw NumericalError(
            "exact_subspace: independent linear constraints exceed D-d; they "
            "over-determine a smaller-than-d subspace");

    std::vector<LinearForm> gens = record.eliminated_forms;
    if (r < D - d) {
        const auto sub = exact_generators(reduced, d, options);
        for (const auto& l : sub.generators) gens.push_back(record.lift(l));
    }

    SubspaceEstimate est;
    est.dim_ambient = D;
    est.dim_subspace = d;
    est.generators = std::move(gens);
    est.basis = null_space_basis(linear_coefficient_matrix(est.generators), d);
    return est;
}

}  // namespace polysub
