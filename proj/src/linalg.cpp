#include "frao/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace frao {

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw InvalidInput("dot: length mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw InvalidInput("vec+: length mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw InvalidInput("vec-: length mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec operator*(double s, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw InvalidInput("matmul: shape mismatch");
    Matrix out(rows_, rhs.cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int k = 0; k < cols_; ++k) {
            const double v = (*this)(r, k);
            if (v == 0.0) continue;
            for (int c = 0; c < rhs.cols_; ++c) out(r, c) += v * rhs(k, c);
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidInput("mat+: shape mismatch");
    Matrix out(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + rhs.a_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidInput("mat-: shape mismatch");
    Matrix out(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
    return out;
}

Matrix Matrix::scaled(double s) const {
    Matrix out(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = s * a_[i];
    return out;
}

Vec Matrix::apply(const Vec& v) const {
    if (static_cast<int>(v.size()) != cols_) throw InvalidInput("matvec: length mismatch");
    Vec out(rows_, 0.0);
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int c = 0; c < cols_; ++c) s += (*this)(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

double Matrix::frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double s = 0.0;
    for (double v : a_) s = std::max(s, std::fabs(v));
    return s;
}

Vec solve_dense(Matrix a, Vec b) {
    const int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n) throw InvalidInput("solve_dense: shape mismatch");
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
        if (std::fabs(a(piv, col)) < 1e-300) throw NumericalFailure("solve_dense: singular system");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    Vec x(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    return x;
}

SymMatrix::SymMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, 0.0), m_(dim, dim) {
    if (dim <= 0) throw InvalidInput("SymMatrix: dimension must be positive");
}

SymMatrix SymMatrix::from_dense(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvalidInput("SymMatrix: matrix not square");
    const int n = m.rows();
    const double tol = 1e-12 * (1.0 + m.max_abs());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(m(i, j) - m(j, i)) > tol)
                throw InvalidInput("SymMatrix: input not symmetric within tolerance");
    SymMatrix s(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    return s;
}

SymMatrix SymMatrix::diagonal(const Vec& d) {
    SymMatrix s(static_cast<int>(d.size()));
    for (int i = 0; i < s.dim_; ++i) s.set(i, i, d[i]);
    return s;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix s(n);
    for (int i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

void SymMatrix::set(int i, int j, double v) {
    a_[static_cast<size_t>(i) * dim_ + j] = v;
    a_[static_cast<size_t>(j) * dim_ + i] = v;
    m_(i, j) = v;
    m_(j, i) = v;
}

void SymMatrix::sync() {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m_(i, j) = a_[static_cast<size_t>(i) * dim_ + j];
}

SymMatrix SymMatrix::operator+(const SymMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw InvalidInput("sym+: dimension mismatch");
    SymMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) out.set(i, j, (*this)(i, j) + rhs(i, j));
    return out;
}

SymMatrix SymMatrix::operator-(const SymMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw InvalidInput("sym-: dimension mismatch");
    SymMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) out.set(i, j, (*this)(i, j) - rhs(i, j));
    return out;
}

SymMatrix SymMatrix::scaled(double s) const {
    SymMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) out.set(i, j, s * (*this)(i, j));
    return out;
}

Vec SymMatrix::apply(const Vec& v) const { return m_.apply(v); }

double SymMatrix::frobenius() const { return m_.frobenius(); }
double SymMatrix::max_abs() const { return m_.max_abs(); }

namespace {

// Lower Cholesky factor; pivots must exceed a relative floor.
Matrix cholesky_factor(const SymMatrix& s) {
    const int n = s.dim();
    Matrix l(n, n);
    const double floor = 1e-14 * (1.0 + s.max_abs());
    for (int j = 0; j < n; ++j) {
        double d = s(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > floor)) throw InvalidInput("SpdMatrix: not positive definite (Cholesky pivot <= 0)");
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double v = s(i, j);
            for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / l(j, j);
        }
    }
    return l;
}

}  // namespace

SpdMatrix::SpdMatrix(SymMatrix s) : sym_(std::move(s)), chol_(cholesky_factor(sym_)) {}

SpdMatrix SpdMatrix::identity(int n) { return SpdMatrix(SymMatrix::identity(n)); }

SpdMatrix SpdMatrix::diagonal(const Vec& d) { return SpdMatrix(SymMatrix::diagonal(d)); }

EigenPair sym_eigen(const SymMatrix& m) {
    const int n = m.dim();
    Matrix a = m.dense();
    Matrix q = Matrix::identity(n);

    const auto off_diagonal = [&a, n]() {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        return std::sqrt(2.0 * off);
    };

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal() <= 1e-15 * (1.0 + a.frobenius())) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int qi = p + 1; qi < n; ++qi) {
                const double apq = a(p, qi);
                if (std::fabs(apq) <= 1e-300) continue;
                const double diff = a(qi, qi) - a(p, p);
                double t;
                if (std::fabs(apq) < 1e-30 * std::fabs(diff)) {
                    t = apq / diff;
                } else {
                    const double theta = 0.5 * diff / apq;
                    t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double h = t * apq;
                a(p, p) -= h;
                a(qi, qi) += h;
                a(p, qi) = 0.0;
                a(qi, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != p && k != qi) {
                        const double akp = a(k, p), akq = a(k, qi);
                        a(k, p) = akp - s * (akq + tau * akp);
                        a(p, k) = a(k, p);
                        a(k, qi) = akq + s * (akp - tau * akq);
                        a(qi, k) = a(k, qi);
                    }
                    const double qkp = q(k, p), qkq = q(k, qi);
                    q(k, p) = qkp - s * (qkq + tau * qkp);
                    q(k, qi) = qkq + s * (qkp - tau * qkq);
                }
            }
        }
    }

    if (off_diagonal() > 1e-10 * (1.0 + a.frobenius()))
        throw NumericalFailure("sym_eigen: Jacobi sweeps did not converge");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    EigenPair out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        const int src = order[k];
        out.values[k] = a(src, src);
        // deterministic sign: largest-magnitude component positive
        int arg = 0;
        for (int r = 1; r < n; ++r)
            if (std::fabs(q(r, src)) > std::fabs(q(arg, src))) arg = r;
        const double flip = q(arg, src) < 0.0 ? -1.0 : 1.0;
        for (int r = 0; r < n; ++r) out.vectors(r, k) = flip * q(r, src);
    }
    return out;
}

SymMatrix sym_fn(const SymMatrix& m, const std::function<double(double)>& f, const char* fn_name) {
    const EigenPair e = sym_eigen(m);
    const int n = m.dim();
    Vec fe(n);
    for (int i = 0; i < n; ++i) {
        fe[i] = f(e.values[i]);
        if (!std::isfinite(fe[i]))
            throw DomainError(std::string("sym_fn: ") + fn_name + " undefined at eigenvalue " +
                              std::to_string(e.values[i]));
    }
    SymMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += e.vectors(i, k) * fe[k] * e.vectors(j, k);
            out.set(i, j, s);
        }
    }
    return out;
}

SymMatrix spd_log(const SpdMatrix& m) {
    return sym_fn(m.sym(), [](double x) { return std::log(x); }, "log");
}

SpdMatrix sym_exp(const SymMatrix& m) {
    return SpdMatrix(sym_fn(m, [](double x) { return std::exp(x); }, "exp"));
}

SpdMatrix spd_sqrt(const SpdMatrix& m) {
    return SpdMatrix(sym_fn(m.sym(), [](double x) { return std::sqrt(x); }, "sqrt"));
}

SpdMatrix spd_pow(const SpdMatrix& m, double t) {
    return SpdMatrix(sym_fn(m.sym(), [t](double x) { return std::pow(x, t); }, "pow"));
}

Vec chol_solve(const Matrix& l, Vec b) {
    const int n = l.rows();
    if (static_cast<int>(b.size()) != n) throw InvalidInput("chol_solve: length mismatch");
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l(i, k) * b[k];
        b[i] = s / l(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
        b[i] = s / l(i, i);
    }
    return b;
}

Matrix chol_solve_matrix(const Matrix& l, Matrix b) {
    const int n = l.rows();
    for (int c = 0; c < b.cols(); ++c) {
        Vec col(n);
        for (int r = 0; r < n; ++r) col[r] = b(r, c);
        col = chol_solve(l, std::move(col));
        for (int r = 0; r < n; ++r) b(r, c) = col[r];
    }
    return b;
}

SpdMatrix spd_inverse(const SpdMatrix& m) {
    const int n = m.dim();
    Matrix inv = chol_solve_matrix(m.chol(), Matrix::identity(n));
    return SpdMatrix(SymMatrix::from_dense(inv));
}

double chol_logdet(const Matrix& l) {
    double s = 0.0;
    for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

SymMatrix congruence_by_inverse_factor(const Matrix& l, const SymMatrix& b) {
    const int n = l.rows();
    if (b.dim() != n) throw InvalidInput("congruence: dimension mismatch");
    // W = L^{-1} B L^{-T}: forward-solve columns, then forward-solve rows.
    Matrix w = b.dense();
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) {
            double s = w(i, c);
            for (int k = 0; k < i; ++k) s -= l(i, k) * w(k, c);
            w(i, c) = s / l(i, i);
        }
    }
    for (int r = 0; r < n; ++r) {
        for (int i = 0; i < n; ++i) {
            double s = w(r, i);
            for (int k = 0; k < i; ++k) s -= l(i, k) * w(r, k);
            w(r, i) = s / l(i, i);
        }
    }
    return SymMatrix::from_dense(w);
}

}  // namespace frao
