#pragma once

#include <array>
#include <functional>
#include <vector>

#include "frao/linalg.hpp"

namespace frao {

// Chart coordinates of a point in parameter space. Domain membership is the
// owning family's business; metric-level code only requires finite entries.
using ParamVector = Vec;

// A Riemannian metric in a chart: theta -> G(theta), SPD on the domain.
// eval must be re-entrant; it is called concurrently.
struct MetricField {
    int dim = 0;
    std::function<SpdMatrix(const ParamVector&)> eval;
};

enum class CurveKind { Geodesic, Pregeodesic, Lerp, Pullback, Custom };

// Parameterized path t in [0,1] -> parameter space.
struct Curve {
    CurveKind kind = CurveKind::Custom;
    std::function<ParamVector(double)> map;
};

// Christoffel symbols of the second kind, Gamma_ij^k, symmetric in (i,j).
// The (i<=j) triangle is stored once so the symmetry is exact.
class ChristoffelTensor {
  public:
    explicit ChristoffelTensor(int dim);
    int dim() const { return dim_; }
    double get(int k, int i, int j) const;
    void set(int k, int i, int j, double v);

  private:
    int dim_;
    std::vector<double> data_;  // [k][triangle(i,j)]
    size_t index(int k, int i, int j) const;
};

// sqrt(dtheta^T G(theta) dtheta). Nonnegative, zero iff dtheta = 0.
double length_element(const MetricField& g, const ParamVector& theta, const Vec& dtheta);

// First-kind symbols 1/2(d_j g_ik + d_i g_jk - d_k g_ij) by central
// differences, raised by G(theta)^{-1}. h <= 0 selects the default step
// eps^(1/3) * max(1,|theta_k|) per coordinate.
ChristoffelTensor christoffels(const MetricField& g, const ParamVector& theta, double h = 0.0);

struct HessianTestResult {
    bool is_hessian = true;
    double worst = 0.0;        // largest violation |d_k g_ij - d_j g_ik| found
    std::array<int, 3> index{{0, 0, 0}};
    ParamVector at;
};

// Sampled test of d g_ij / d theta_k == d g_ik / d theta_j. A true verdict
// means no violation above tol*(1+||G||_F) was detected at the samples.
HessianTestResult hessian_metric_test(const MetricField& g, const std::vector<ParamVector>& samples,
                                      double h = 0.0, double tol = 1e-6);

struct GeodesicBvpResult {
    Curve curve;  // linear interpolation through the integration samples
    std::vector<ParamVector> samples;
    double length = 0.0;
    int newton_iterations = 0;
};

// Shooting oracle for the geodesic boundary value problem, dim <= 3.
// Classical fixed-step 4th-order integration of the IVP; Newton iteration on
// the initial velocity with a finite-difference Jacobian until
// ||gamma(1) - theta1|| <= 1e-8. A validation tool, not a production path.
GeodesicBvpResult geodesic_bvp_oracle(const MetricField& g, const ParamVector& theta0,
                                      const ParamVector& theta1, int steps = 1024);

}  // namespace frao
