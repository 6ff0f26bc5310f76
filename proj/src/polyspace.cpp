#include "polysub/polyspace.hpp"

#include <stdexcept>
#include <string>

namespace polysub {

std::int64_t triangular(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("triangular: n must be nonnegative");
    return n * (n + 1) / 2;
}

int monomial_index(int i, int j, int dim) {
    if (i < 0 || j < i || j >= dim)
        throw std::invalid_argument("monomial_index: need 0 <= i <= j < dim");
    // Block for first index i starts after the blocks of 0..i-1, which hold
    // dim, dim-1, ..., dim-i+1 monomials.
    const std::int64_t offset = static_cast<std::int64_t>(i) * dim -
                                static_cast<std::int64_t>(i) * (i - 1) / 2;
    return static_cast<int>(offset) + (j - i);
}

std::vector<Monomial2> canonical_monomials(int dim) {
    std::vector<Monomial2> out;
    out.reserve(static_cast<std::size_t>(triangular(dim)));
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) out.push_back({i, j});
    return out;
}

LinearForm::LinearForm(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) throw std::invalid_argument("LinearForm: empty coefficients");
}

double LinearForm::evaluate(const Eigen::VectorXd& v) const {
    if (v.size() != coeffs_.size())
        throw std::invalid_argument("LinearForm::evaluate: dimension mismatch");
    return coeffs_.dot(v);
}

QuadraticForm::QuadraticForm(int dim, Eigen::VectorXd coeffs)
    : dim_(dim), coeffs_(std::move(coeffs)) {
    if (dim_ <= 0) throw std::invalid_argument("QuadraticForm: dim must be positive");
    if (coeffs_.size() != triangular(dim_))
        throw std::invalid_argument("QuadraticForm: coefficient length must be dim*(dim+1)/2");
}

QuadraticForm QuadraticForm::from_gram(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("QuadraticForm::from_gram: matrix must be square");
    const int d = static_cast<int>(a.rows());
    Eigen::VectorXd c(triangular(d));
    for (int i = 0; i < d; ++i) {
        c[monomial_index(i, i, d)] = a(i, i);
        for (int j = i + 1; j < d; ++j) c[monomial_index(i, j, d)] = a(i, j) + a(j, i);
    }
    return QuadraticForm(d, std::move(c));
}

Eigen::MatrixXd QuadraticForm::to_gram() const {
    Eigen::MatrixXd g(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        g(i, i) = coeffs_[monomial_index(i, i, dim_)];
        for (int j = i + 1; j < dim_; ++j) {
            const double half = 0.5 * coeffs_[monomial_index(i, j, dim_)];
            g(i, j) = half;
            g(j, i) = half;
        }
    }
    return g;
}

double QuadraticForm::coeff(int i, int j) const {
    if (i > j) std::swap(i, j);
    return coeffs_[monomial_index(i, j, dim_)];
}

double QuadraticForm::evaluate(const Eigen::VectorXd& v) const {
    if (v.size() != dim_)
        throw std::invalid_argument("QuadraticForm::evaluate: dimension mismatch");
    double acc = 0.0;
    int idx = 0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j, ++idx) acc += coeffs_[idx] * v[i] * v[j];
    return acc;
}

MonomialOrdering MonomialOrdering::identity(int dim) {
    MonomialOrdering o{dim, std::vector<int>(static_cast<std::size_t>(dim))};
    for (int a = 0; a < dim; ++a) o.perm[static_cast<std::size_t>(a)] = a;
    return o;
}

MonomialOrdering MonomialOrdering::cyclic_power(int dim, int k) {
    MonomialOrdering o{dim, std::vector<int>(static_cast<std::size_t>(dim))};
    const int shift = ((k % dim) + dim) % dim;
    for (int a = 0; a < dim; ++a) o.perm[static_cast<std::size_t>(a)] = (a + shift) % dim;
    return o;
}

static void check_ordering(const MonomialOrdering& ordering) {
    if (ordering.dim <= 0 || static_cast<int>(ordering.perm.size()) != ordering.dim)
        throw std::invalid_argument("MonomialOrdering: perm size must equal dim");
    std::vector<bool> seen(static_cast<std::size_t>(ordering.dim), false);
    for (int v : ordering.perm) {
        if (v < 0 || v >= ordering.dim || seen[static_cast<std::size_t>(v)])
            throw std::invalid_argument("MonomialOrdering: perm is not a permutation");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

std::vector<Monomial2> column_order(const MonomialOrdering& ordering) {
    check_ordering(ordering);
    std::vector<Monomial2> out;
    out.reserve(static_cast<std::size_t>(triangular(ordering.dim)));
    for (int a = 0; a < ordering.dim; ++a) {
        for (int b = a; b < ordering.dim; ++b) {
            const int u = ordering.perm[static_cast<std::size_t>(a)];
            const int v = ordering.perm[static_cast<std::size_t>(b)];
            out.push_back({std::min(u, v), std::max(u, v)});
        }
    }
    return out;
}

CoefficientMatrix quadratic_coefficient_matrix(std::span<const QuadraticForm> quadrics,
                                               const MonomialOrdering& ordering) {
    const auto order = column_order(ordering);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(quadrics.size()),
                      static_cast<Eigen::Index>(order.size()));
    for (std::size_t r = 0; r < quadrics.size(); ++r) {
        if (quadrics[r].dim() != ordering.dim)
            throw std::invalid_argument("quadratic_coefficient_matrix: dimension mismatch");
        for (std::size_t c = 0; c < order.size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                quadrics[r].coeff(order[c].i, order[c].j);
    }
    return {std::move(m), ordering};
}

Eigen::MatrixXd linear_coefficient_matrix(std::span<const LinearForm> linears) {
    if (linears.empty()) return Eigen::MatrixXd(0, 0);
    const int d = linears.front().dim();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(linears.size()), d);
    for (std::size_t r = 0; r < linears.size(); ++r) {
        if (linears[r].dim() != d)
            throw std::invalid_argument("linear_coefficient_matrix: dimension mismatch");
        m.row(static_cast<Eigen::Index>(r)) = linears[r].coeffs().transpose();
    }
    return m;
}

QuadraticForm multiply_var(const LinearForm& l, int var) {
    const int d = l.dim();
    if (var < 0 || var >= d) throw std::invalid_argument("multiply_var: variable out of range");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(triangular(d));
    for (int k = 0; k < d; ++k)
        c[monomial_index(std::min(var, k), std::max(var, k), d)] += l.coeffs()[k];
    return QuadraticForm(d, std::move(c));
}

DivisionResult divide_by_var(const QuadraticForm& q, int var, double tol) {
    const int d = q.dim();
    if (var < 0 || var >= d) throw std::invalid_argument("divide_by_var: variable out of range");
    const double qnorm = q.norm();
    if (qnorm == 0.0) throw std::invalid_argument("divide_by_var: zero polynomial");

    Eigen::VectorXd lc(d);
    for (int j = 0; j < d; ++j) lc[j] = q.coeff(var, j);

    double rem_sq = 0.0;
    for (const auto& mono : canonical_monomials(d)) {
        if (mono.i == var || mono.j == var) continue;
        const double c = q.coeff(mono.i, mono.j);
        rem_sq += c * c;
    }
    const double residual = std::sqrt(rem_sq) / qnorm;
    return {LinearForm(std::move(lc)), residual, residual <= tol};
}

}  // namespace polysub
