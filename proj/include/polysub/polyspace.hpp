// Coefficient-space representation of homogeneous linear and quadratic
// polynomials in D variables T_0 .. T_{D-1}.
//
// A quadratic form is stored as a dense coefficient vector over the monomial
// basis T_i T_j with i <= j. The canonical storage order is descending
// lexicographic under the identity labelling:
//   (0,0),(0,1),...,(0,D-1),(1,1),...,(D-1,D-1)
// of length D(D+1)/2. Algorithms that need a different variable order view
// the coefficients through a MonomialOrdering; storage never changes.
//
// Off-diagonal coefficients hold the summed contribution of both Gram matrix
// entries: the form of a Gram matrix A has coefficient A_ii on T_i^2 and
// A_ij + A_ji on T_i T_j. Reconstructing the (symmetrized) Gram matrix
// halves the off-diagonal coefficients again.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace polysub {

// n-th triangular number n(n+1)/2; the size of the degree-2 monomial basis
// in n variables.
std::int64_t triangular(std::int64_t n);

// Degree-2 monomial T_i T_j with 0 <= i <= j < D.
struct Monomial2 {
    int i = 0;
    int j = 0;
    friend bool operator==(const Monomial2&, const Monomial2&) = default;
};

// Position of T_i T_j (i <= j) in the canonical order for dimension `dim`.
int monomial_index(int i, int j, int dim);

// All degree-2 monomials in canonical order; length triangular(dim).
std::vector<Monomial2> canonical_monomials(int dim);

class LinearForm {
public:
    explicit LinearForm(Eigen::VectorXd coeffs);

    int dim() const { return static_cast<int>(coeffs_.size()); }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    double evaluate(const Eigen::VectorXd& v) const;
    double norm() const { return coeffs_.norm(); }

private:
    Eigen::VectorXd coeffs_;
};

class QuadraticForm {
public:
    // coeffs must have length triangular(dim), canonical order.
    QuadraticForm(int dim, Eigen::VectorXd coeffs);

    // Embeds a (not necessarily symmetric) square matrix; symmetrizes.
    static QuadraticForm from_gram(const Eigen::MatrixXd& a);

    // Symmetric Gram matrix; from_gram(to_gram(q)) == q and
    // to_gram(from_gram(A)) == (A + A^T)/2.
    Eigen::MatrixXd to_gram() const;

    int dim() const { return dim_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    double coeff(int i, int j) const;  // coefficient of T_min(i,j) T_max(i,j)
    double evaluate(const Eigen::VectorXd& v) const;
    double norm() const { return coeffs_.norm(); }

private:
    int dim_;
    Eigen::VectorXd coeffs_;
};

// A relabelling of the D variables: position a is occupied by variable
// perm[a]. Orderings only permute views of coefficient vectors.
struct MonomialOrdering {
    int dim = 0;
    std::vector<int> perm;

    static MonomialOrdering identity(int dim);
    // Positions shifted cyclically by k: perm[a] = (a + k) mod dim.
    static MonomialOrdering cyclic_power(int dim, int k);
};

// Monomials in descending lexicographic order under the given relabelling:
// the block of position-0's variable first (its square, then its products
// with the later positions), then the block of position 1, and so on.
std::vector<Monomial2> column_order(const MonomialOrdering& ordering);

// Dense matrix whose rows are polynomials and whose columns follow
// column_order(ordering).
struct CoefficientMatrix {
    Eigen::MatrixXd entries;
    MonomialOrdering ordering;

    int rows() const { return static_cast<int>(entries.rows()); }
    int cols() const { return static_cast<int>(entries.cols()); }
};

CoefficientMatrix quadratic_coefficient_matrix(std::span<const QuadraticForm> quadrics,
                                               const MonomialOrdering& ordering);

// Stacked coefficient rows of linear forms (rows x dim).
Eigen::MatrixXd linear_coefficient_matrix(std::span<const LinearForm> linears);

// T_var * l as a quadratic form.
QuadraticForm multiply_var(const LinearForm& l, int var);

struct DivisionResult {
    LinearForm quotient;
    // Norm of the coefficients on monomials not containing T_var, relative
    // to the norm of the input. Zero iff the division is exact.
    double residual = 0.0;
    bool exact = false;
};

// Divides q by the variable T_var in the least-squares sense: the quotient
// takes coefficient of T_var T_j for entry j (the T_var^2 coefficient goes
// to entry var). `tol` only classifies the result as exact.
DivisionResult divide_by_var(const QuadraticForm& q, int var, double tol = 1e-9);

}  // namespace polysub
