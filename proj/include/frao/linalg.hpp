#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "frao/errors.hpp"

namespace frao {

using Vec = std::vector<double>;

// Small dense vector helpers used throughout the library.
double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);

// Dense row-major matrix. Only what the toolkit needs: products, transpose,
// Frobenius norm, Gaussian elimination for small systems.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix scaled(double s) const;
    Vec apply(const Vec& v) const;

    double frobenius() const;
    double max_abs() const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

// Solve A x = b for a small square system (partial pivoting). Throws
// NumericalFailure on a singular pivot.
Vec solve_dense(Matrix a, Vec b);

// Symmetric dense matrix. Construction checks the symmetry tolerance
// |a_ij - a_ji| <= 1e-12 * (1 + max|entry|) and then stores the exact
// symmetrization, so downstream code may rely on a(i,j) == a(j,i).
class SymMatrix {
  public:
    explicit SymMatrix(int dim);
    static SymMatrix from_dense(const Matrix& m);
    static SymMatrix diagonal(const Vec& d);
    static SymMatrix identity(int n);

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
    // Writes both (i,j) and (j,i).
    void set(int i, int j, double v);

    const Matrix& dense() const { return m_; }

    SymMatrix operator+(const SymMatrix& rhs) const;
    SymMatrix operator-(const SymMatrix& rhs) const;
    SymMatrix scaled(double s) const;
    Vec apply(const Vec& v) const;

    double frobenius() const;
    double max_abs() const;

  private:
    int dim_ = 0;
    std::vector<double> a_;
    Matrix m_;  // dense mirror, kept in sync
    void sync();
};

// Symmetric positive-definite matrix: a SymMatrix whose Cholesky
// factorization succeeds with strictly positive pivots.
class SpdMatrix {
  public:
    explicit SpdMatrix(SymMatrix s);
    static SpdMatrix identity(int n);
    static SpdMatrix diagonal(const Vec& d);

    int dim() const { return sym_.dim(); }
    double operator()(int i, int j) const { return sym_(i, j); }
    const SymMatrix& sym() const { return sym_; }

    // Lower Cholesky factor, computed at construction.
    const Matrix& chol() const { return chol_; }

    double frobenius() const { return sym_.frobenius(); }

  private:
    SymMatrix sym_;
    Matrix chol_;
};

struct EigenPair {
    Vec values;      // ascending
    Matrix vectors;  // orthonormal, column k pairs with values[k]
};

// Full spectral decomposition by cyclic Jacobi rotations. Deterministic;
// accurate for the desk-scale dimensions this library targets.
EigenPair sym_eigen(const SymMatrix& m);

// Q f(Lambda) Q^T for an arbitrary scalar function of the spectrum.
// Throws DomainError if f is undefined (non-finite) at an eigenvalue.
SymMatrix sym_fn(const SymMatrix& m, const std::function<double(double)>& f,
                 const char* fn_name = "fn");

SymMatrix spd_log(const SpdMatrix& m);
SpdMatrix sym_exp(const SymMatrix& m);
SpdMatrix spd_sqrt(const SpdMatrix& m);
SpdMatrix spd_pow(const SpdMatrix& m, double t);

// Cholesky-based solves with the lower factor L (L L^T = A).
Vec chol_solve(const Matrix& l, Vec b);
Matrix chol_solve_matrix(const Matrix& l, Matrix b);
SpdMatrix spd_inverse(const SpdMatrix& m);
double chol_logdet(const Matrix& l);

// L^{-1} B L^{-T}; symmetric whenever B is.
SymMatrix congruence_by_inverse_factor(const Matrix& l, const SymMatrix& b);

}  // namespace frao
