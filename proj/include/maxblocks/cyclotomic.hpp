#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_d) and exact linear algebra
// over them: numbers are rational-coefficient polynomials reduced modulo the
// d-th cyclotomic polynomial, so equality, rank and kernel computations are
// exact.  This is the arithmetic bedrock for the eigenvalue-complex
// cohomology computations; nothing here is approximate.

#include <gmpxx.h>

#include <vector>

#include "maxblocks/errors.hpp"

namespace maxblocks {

using Rational = mpq_class;

// Euler totient; phi(d) is the degree of Q(zeta_d) over Q.
int euler_phi(int d);

// Coefficients (constant term first) of the d-th cyclotomic polynomial,
// computed by exact division of x^d - 1 by the product of the lower-order
// cyclotomic polynomials.  Monic, integer coefficients, degree phi(d).
std::vector<Rational> cyclotomic_polynomial(int d);

// An element of Q(zeta_d), stored as the canonical representative of degree
// < phi(d).  Order 1 is plain Q (the embedding used for "rational" matrix
// entries).  Arithmetic between different orders is an error, not a
// coercion: callers choose a common field explicitly.
class CycNum {
  public:
    CycNum(); // zero in Q (order 1)

    static CycNum zero(int order);
    static CycNum one(int order);
    static CycNum from_rational(int order, const Rational& value);
    // zeta_order^k (k may be negative or >= order; reduced mod order).
    static CycNum zeta_pow(int order, long k);
    // From explicit coefficients c0 + c1 x + ... (reduced mod Phi_order).
    static CycNum from_coeffs(int order, std::vector<Rational> coeffs);

    int order() const { return order_; }
    // Canonical coefficients, constant term first, size phi(order).
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    // True when the element lies in Q (all non-constant coefficients zero).
    bool is_rational() const;
    Rational rational_value() const; // requires is_rational()

    CycNum operator-() const;
    CycNum inverse() const; // errors on zero

    // Field automorphism zeta -> zeta^a (gcd(a, order) = 1).
    CycNum galois(long a) const;

    friend CycNum operator+(const CycNum& x, const CycNum& y);
    friend CycNum operator-(const CycNum& x, const CycNum& y);
    friend CycNum operator*(const CycNum& x, const CycNum& y);
    friend CycNum operator/(const CycNum& x, const CycNum& y);
    friend bool operator==(const CycNum& x, const CycNum& y);
    friend bool operator!=(const CycNum& x, const CycNum& y);

  private:
    int order_;
    std::vector<Rational> c_;
    void reduce_(std::vector<Rational> raw);
};

enum class CycOp { add, sub, mul, div };

// Dispatcher form of the four field operations (same checks as operators).
CycNum cyc_arith(const CycNum& a, const CycNum& b, CycOp op);

// Dense matrix over Q(zeta_d).  All entries share one order; mixing orders
// is rejected.  Sizes here are small (strata counts in the tens), so dense
// storage and plain Gaussian elimination are the right tool.
class ExactMatrix {
  public:
    ExactMatrix(int order, int rows, int cols); // zero matrix
    static ExactMatrix identity(int order, int n);

    int order() const { return order_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    CycNum& at(int r, int c);
    const CycNum& at(int r, int c) const;

    ExactMatrix mul(const ExactMatrix& rhs) const;
    bool is_zero() const;

    // Entry-wise field automorphism zeta -> zeta^a.
    ExactMatrix galois(long a) const;

  private:
    int order_;
    int rows_, cols_;
    std::vector<CycNum> e_;
    void check_index_(int r, int c) const;
};

// Exact rank by fraction-managed Gaussian elimination with first-nonzero
// pivoting (scan columns left to right, take the first row with a nonzero
// entry).
int matrix_rank(const ExactMatrix& m);

// Columns form a basis of the right null space: m * result = 0.
// Result has m.cols() rows and (m.cols() - rank) columns.
ExactMatrix kernel_basis(const ExactMatrix& m);

// [a | b] side by side (same order and row count).
ExactMatrix hstack(const ExactMatrix& a, const ExactMatrix& b);

// [a / b] stacked (same order and column count).
ExactMatrix vstack(const ExactMatrix& a, const ExactMatrix& b);

// Block-diagonal [a 0 / 0 b] (same order).
ExactMatrix block_diag(const ExactMatrix& a, const ExactMatrix& b);

// A cochain complex handed around as plain linear data: dims[j] is the
// dimension of the degree-j term (degrees 0..dims.size()-1) and diffs[j] is
// the matrix of d_j : C^j -> C^{j+1} (so diffs has one entry fewer than
// dims; a single-degree complex has none).
struct LinearComplex {
    int order = 1;
    std::vector<int> dims;
    std::vector<ExactMatrix> diffs;
};

// dim H^j = dims[j] - rank(d_j) - rank(d_{j-1}) per degree.  Checks shapes
// and d_{j+1} * d_j = 0; a violation is reported as "not a complex" naming
// the offending degree.
std::vector<int> cohomology_dims(const std::vector<int>& dims,
                                 const std::vector<ExactMatrix>& diffs);
std::vector<int> cohomology_dims(const LinearComplex& c);

// Dimension of the kernel of the induced map H^j(source) -> H^j(target).
// morphism[j] is the degree-j matrix (target.dims[j] x source.dims[j]);
// commutation with the differentials is checked in degrees j-1, j, j+1.
int kernel_dim_on_cohomology(const LinearComplex& source,
                             const LinearComplex& target,
                             const std::vector<ExactMatrix>& morphism,
                             int j);

} // namespace maxblocks
