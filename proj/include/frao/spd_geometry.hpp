#pragma once

#include "frao/linalg.hpp"

namespace frao {

// Affine-invariant (trace metric) distance on the SPD cone:
// sqrt(1/2 sum_i log^2 lambda_i(P0^{-1} P1)). Symmetric, zero iff P0 == P1.
double spd_distance(const SpdMatrix& p0, const SpdMatrix& p1);

// Geodesic P0^{1/2} (P0^{-1/2} P1 P0^{-1/2})^t P0^{1/2}, computed by
// Cholesky congruence plus one eigendecomposition of the inner matrix.
// t may lie outside [0,1] (extrapolation).
SpdMatrix spd_geodesic(const SpdMatrix& p0, const SpdMatrix& p1, double t);

// Matrix arithmetic-harmonic mean: A <- (A+H)/2, H <- 2(A^{-1}+H^{-1})^{-1}
// until ||A-H||_F <= tol * ||A||_F. Converges quadratically to the geodesic
// midpoint of (p0, p1).
SpdMatrix ahm_midpoint(const SpdMatrix& p0, const SpdMatrix& p1, double tol = 1e-12);

struct ExtremeEigs {
    double min;
    double max;
};

// Largest eigenvalue by power iteration, smallest by inverse iteration with
// Cholesky solves. Each within relative tol. Iteration cap 10*d*log(1/tol).
ExtremeEigs extreme_eigs(const SpdMatrix& m, double tol = 1e-10);

// Birkhoff (Hilbert) projective distance log(lmax/lmin) of P0^{-1} P1.
// Zero iff P1 is a positive multiple of P0.
double birkhoff_distance(const SpdMatrix& p0, const SpdMatrix& p1);

// Straight-line Birkhoff geodesic
//   gamma(t) = ((b a^t - a b^t)/(b-a)) P0 + ((b^t - a^t)/(b-a)) P1,
// a = lmin(P0^{-1} P1), b = lmax(P0^{-1} P1); constant projective speed:
// birkhoff_distance(P0, gamma(t)) = t * birkhoff_distance(P0, P1). The
// coefficients are a nonnegative mixture for t in [0,1], so the result
// stays SPD. When the spectrum degenerates (b ~ a) the analytic limit
// c^t((1-t)P0 + (t/c)P1) is used instead of the 0/0 expression.
SpdMatrix birkhoff_geodesic(const SpdMatrix& p0, const SpdMatrix& p1, double t);

}  // namespace frao
