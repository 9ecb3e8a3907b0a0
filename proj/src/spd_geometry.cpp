#include "frao/spd_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace frao {

namespace {

void check_same_dim(const SpdMatrix& p0, const SpdMatrix& p1, const char* op) {
    if (p0.dim() != p1.dim()) throw InvalidInput(std::string(op) + ": dimension mismatch");
}

// Spectrum of P0^{-1} P1 via the symmetric congruence L^{-1} P1 L^{-T},
// L the Cholesky factor of P0 (similar matrices, same eigenvalues).
Vec relative_spectrum(const SpdMatrix& p0, const SpdMatrix& p1) {
    const SymMatrix w = congruence_by_inverse_factor(p0.chol(), p1.sym());
    return sym_eigen(w).values;
}

}  // namespace

double spd_distance(const SpdMatrix& p0, const SpdMatrix& p1) {
    check_same_dim(p0, p1, "spd_distance");
    const Vec lam = relative_spectrum(p0, p1);
    double s = 0.0;
    for (double v : lam) {
        const double lg = std::log(v);
        s += lg * lg;
    }
    return std::sqrt(0.5 * s);
}

SpdMatrix spd_geodesic(const SpdMatrix& p0, const SpdMatrix& p1, double t) {
    check_same_dim(p0, p1, "spd_geodesic");
    const int n = p0.dim();
    const Matrix& l = p0.chol();
    const SymMatrix w = congruence_by_inverse_factor(l, p1.sym());
    const EigenPair e = sym_eigen(w);
    // result = (L Q) diag(lambda^t) (L Q)^T
    Matrix lq = l * e.vectors;
    Matrix out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += lq(i, k) * std::pow(e.values[k], t) * lq(j, k);
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return SpdMatrix(SymMatrix::from_dense(out));
}

SpdMatrix ahm_midpoint(const SpdMatrix& p0, const SpdMatrix& p1, double tol) {
    check_same_dim(p0, p1, "ahm_midpoint");
    if (!(tol > 0.0)) throw InvalidInput("ahm_midpoint: tol must be positive");
    SpdMatrix a = p0;
    SpdMatrix h = p1;
    for (int iter = 0; iter < 200; ++iter) {
        if ((a.sym() - h.sym()).frobenius() <= tol * a.frobenius()) return a;
        const SymMatrix arith = (a.sym() + h.sym()).scaled(0.5);
        const SymMatrix inv_sum = spd_inverse(a).sym() + spd_inverse(h).sym();
        const SymMatrix harm = spd_inverse(SpdMatrix(inv_sum)).sym().scaled(2.0);
        a = SpdMatrix(arith);
        h = SpdMatrix(harm);
    }
    throw NumericalFailure("ahm_midpoint: no convergence after 200 iterations");
}

namespace {

Vec start_vector(int n) {
    // deterministic and non-orthogonal to any structured eigenvector
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * i;
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    return v;
}

// Rayleigh-quotient iteration loop shared by the two directions. `step`
// maps v -> M v (power) or v -> M^{-1} v (inverse iteration).
double iterate_extreme(int n, int cap, double tol, const std::function<Vec(const Vec&)>& step) {
    Vec v = start_vector(n);
    double theta = 0.0;
    for (int it = 0; it < cap; ++it) {
        Vec w = step(v);
        theta = dot(v, w);
        Vec resid = w - theta * v;
        if (norm2(resid) <= tol * std::max(std::fabs(theta), 1e-300)) return theta;
        const double nw = norm2(w);
        if (!(nw > 0.0)) throw NumericalFailure("extreme_eigs: iterate collapsed");
        for (size_t i = 0; i < w.size(); ++i) w[i] /= nw;
        v = std::move(w);
    }
    throw NumericalFailure("extreme_eigs: iteration cap exceeded");
}

}  // namespace

ExtremeEigs extreme_eigs(const SpdMatrix& m, double tol) {
    if (!(tol > 0.0 && tol < 1.0)) throw InvalidInput("extreme_eigs: tol must be in (0,1)");
    const int n = m.dim();
    if (n == 1) return {m(0, 0), m(0, 0)};
    const int cap = std::max(64, static_cast<int>(10.0 * n * std::log(1.0 / tol)));

    const double lmax = iterate_extreme(n, cap, tol, [&](const Vec& v) { return m.sym().apply(v); });
    const double inv_theta =
        iterate_extreme(n, cap, tol, [&](const Vec& v) { return chol_solve(m.chol(), v); });
    return {1.0 / inv_theta, lmax};
}

double birkhoff_distance(const SpdMatrix& p0, const SpdMatrix& p1) {
    check_same_dim(p0, p1, "birkhoff_distance");
    double lmin, lmax;
    if (p0.dim() <= 48) {
        const Vec lam = relative_spectrum(p0, p1);
        lmin = lam.front();
        lmax = lam.back();
    } else {
        const SymMatrix w = congruence_by_inverse_factor(p0.chol(), p1.sym());
        const ExtremeEigs e = extreme_eigs(SpdMatrix(w), 1e-12);
        lmin = e.min;
        lmax = e.max;
    }
    return std::max(0.0, std::log(lmax / lmin));
}

SpdMatrix birkhoff_geodesic(const SpdMatrix& p0, const SpdMatrix& p1, double t) {
    check_same_dim(p0, p1, "birkhoff_geodesic");
    if (t < 0.0 || t > 1.0) throw InvalidInput("birkhoff_geodesic: t must lie in [0,1]");
    // extreme eigenvalues of P0^{-1} P1: this orientation makes the segment
    // constant-speed in the Birkhoff metric and degenerates to c^t P0 on rays
    const Vec lam = relative_spectrum(p0, p1);
    const double a = lam.front();
    const double b = lam.back();
    SymMatrix out(p0.dim());
    if (std::fabs(b - a) <= 1e-12 * b) {
        const double c = b;
        const double ct = std::pow(c, t);
        out = p0.sym().scaled(ct * (1.0 - t)) + p1.sym().scaled(ct * t / c);
    } else {
        const double at = std::pow(a, t);
        const double bt = std::pow(b, t);
        const double c0 = (b * at - a * bt) / (b - a);
        const double c1 = (bt - at) / (b - a);
        out = p0.sym().scaled(c0) + p1.sym().scaled(c1);
    }
    return SpdMatrix(out);
}

}  // namespace frao
