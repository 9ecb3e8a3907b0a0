#pragma once

#include <random>

#include "frao/families.hpp"

namespace testutil {

using frao::Matrix;
using frao::ParamVector;
using frao::SpdMatrix;
using frao::SymMatrix;
using frao::Vec;

inline Matrix random_square(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
    return a;
}

// A A^T + boost I; boost keeps the conditioning desk-friendly.
inline SpdMatrix random_spd(std::mt19937_64& rng, int d, double boost = 0.5) {
    Matrix a = random_square(rng, d);
    Matrix g = a * a.transpose();
    for (int i = 0; i < d; ++i) g(i, i) += boost * d;
    return SpdMatrix(SymMatrix::from_dense(g));
}

inline Matrix random_invertible(std::mt19937_64& rng, int d) {
    for (;;) {
        Matrix a = random_square(rng, d);
        double diag = 0.0;
        for (int i = 0; i < d; ++i) diag += std::fabs(a(i, i));
        for (int i = 0; i < d; ++i) a(i, i) += (a(i, i) < 0 ? -1.0 : 1.0) * (0.5 + 0.1 * diag);
        return a;
    }
}

inline Vec random_simplex(std::mt19937_64& rng, int d) {
    std::gamma_distribution<double> gamma(1.0, 1.0);
    Vec p(d);
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        p[i] = gamma(rng) + 1e-3;
        s += p[i];
    }
    for (double& v : p) v /= s;
    // renormalize exactly enough for the 1e-12 simplex check
    double s2 = 0.0;
    for (double v : p) s2 += v;
    p[0] += 1.0 - s2;
    return p;
}

inline ParamVector random_normal_params(std::mt19937_64& rng, double mu_scale = 1.5,
                                        double sigma_lo = 0.4, double sigma_hi = 2.5) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {mu_scale * (2.0 * u(rng) - 1.0), sigma_lo + (sigma_hi - sigma_lo) * u(rng)};
}

inline frao::Curve geodesic_curve(const frao::FamilyDescriptor& fam, ParamVector a, ParamVector b) {
    frao::Curve c;
    c.kind = frao::CurveKind::Geodesic;
    auto geo = fam.closed_geodesic;
    c.map = [geo, a, b](double t) { return geo(a, b, t); };
    return c;
}

inline frao::EllipticalParams random_mvn_params(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec m(d);
    for (double& v : m) v = normal(rng);
    return {m, random_spd(rng, d)};
}

}  // namespace testutil
